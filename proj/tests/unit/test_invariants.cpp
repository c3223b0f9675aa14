#include <algorithm>
#include <cmath>
#include <random>
#include <regex>
#include <set>

#include "doctest.h"
#include "kramers/asymptotics.hpp"
#include "kramers/catalog.hpp"
#include "kramers/errors.hpp"
#include "kramers/oracle1d.hpp"
#include "kramers/sampler.hpp"
#include "kramers/spectral1d.hpp"
#include "kramers/topology.hpp"

using namespace kramers;

namespace {

WellDecomposition wells_of(FieldPtr f, const DomainGeometry& g, int resolution = 0) {
  TopologyOptions t;
  t.resolution = resolution;
  return decompose(f, g, build_atlas(*f, g), t);
}

WellDecomposition wells_of(const std::string& name, int resolution = 0) {
  return wells_of(make_field(catalog_spec(name)), catalog_entry(name).domain, resolution);
}

std::vector<std::string> names(int dim) {
  std::vector<std::string> out;
  for (const auto& e : catalog())
    if (dim == 0 || e.dimension == dim) out.push_back(e.name);
  return out;
}

bool a0_ok(const std::string& name) {
  auto f = make_field(catalog_spec(name));
  return build_atlas(*f, catalog_entry(name).domain).a0_report.passed;
}

bool a13(const AssumptionReport& r) {
  auto ok = [](const Verdict& v) { return v.value && *v.value; };
  return ok(r.a0) && ok(r.a1) && ok(r.a2) && ok(r.a3);
}

double minimax_1d(const PotentialField& f, const DomainGeometry& g, double x) {
  const int n = 100000;
  double left = -1e300, right = -1e300;
  for (int i = 0; i <= n; ++i) {
    left = std::max(left, f.value({g.a() + (x - g.a()) * i / n, 0}));
    right = std::max(right, f.value({x + (g.b() - x) * i / n, 0}));
  }
  return std::min(left, right);
}

int component_at(const Topology& topo, const Point& p, const SublevelComponent& c) {
  return topo.component_id(c.query, topo.attach(p, c.query));
}

}  // namespace

TEST_SUITE("potential") {
  TEST_CASE("hessians agree with differentiated gradients and are symmetric") {
    std::mt19937_64 rng(21);
    for (const auto& e : catalog()) {
      auto f = make_field(catalog_spec(e.name));
      auto box = e.domain.bounding_box();
      std::uniform_real_distribution<double> ux(box[0], box[1]), uy(box[2], box[3]);
      int got = 0;
      double worst = 0.0, asym = 0.0;
      while (got < 100) {
        Point p{ux(rng), e.dimension == 2 ? uy(rng) : 0.0};
        if (!e.domain.contains(p)) continue;
        ++got;
        auto ev = f->eval(p);
        for (int j = 0; j < e.dimension; ++j) {
          double step = 1e-5 * std::max(1.0, std::abs(p[j]));
          Point a = p, b = p;
          a[j] += step;
          b[j] -= step;
          Point ga, gb;
          f->gradient(a, ga);
          f->gradient(b, gb);
          for (int i = 0; i < e.dimension; ++i) {
            double fd = (ga[i] - gb[i]) / (2 * step);
            double h = ev.hessian[i * 2 + j];
            worst = std::max(worst, std::abs(fd - h) / std::max(1.0, std::abs(h)));
          }
        }
        if (e.dimension == 2)
          asym = std::max(asym, std::abs(ev.hessian[1] - ev.hessian[2]) /
                                    std::max(1.0, std::abs(ev.hessian[1])));
      }
      CHECK_MESSAGE(worst < 1e-5, e.name);
      CHECK_MESSAGE(asym < 1e-12, e.name);
    }
  }
}

TEST_SUITE("landscape") {
  TEST_CASE("reported critical points have a small gradient") {
    for (const auto& name : names(0)) {
      if (!a0_ok(name)) continue;
      auto f = make_field(catalog_spec(name));
      auto a = build_atlas(*f, catalog_entry(name).domain);
      for (const auto& c : a.interior_criticals) {
        Point g;
        f->gradient(c.location, g);
        CHECK_MESSAGE(std::hypot(g[0], g[1]) < LandscapeOptions{}.tol_grad, name);
        if (c.index == 1) {
          REQUIRE(c.neg_eigenvalue);
          CHECK(*c.neg_eigenvalue == c.eigenvalues[0]);
          CHECK(*c.neg_eigenvalue < 0.0);
        }
      }
    }
  }

  TEST_CASE("Morse counts do not depend on the seed density") {
    for (const auto& name : names(0)) {
      if (!a0_ok(name)) continue;
      auto f = make_field(catalog_spec(name));
      const auto& g = catalog_entry(name).domain;
      std::vector<int> counts;
      for (int seeds : {8, 16, 32}) {
        auto crit = find_critical_points(*f, g, seeds);
        int c[3] = {0, 0, 0};
        for (const auto& p : crit) ++c[p.index];
        counts.push_back(c[0] * 100 + c[1] * 10 + c[2]);
      }
      CHECK_MESSAGE(counts[0] == counts[1], name);
      CHECK_MESSAGE(counts[1] == counts[2], name);
    }
  }

  TEST_CASE("interior sublevel components lie in their own basin") {
    for (const char* name : {"double_well", "triple_well", "tilted_double_well", "two_well_2d"}) {
      auto w = wells_of(name);
      const auto& topo = *w.topology;
      const auto& filt = topo.filtration();
      int checked = 0;
      for (const auto& c : topo.components()) {
        if (c.touches_boundary || c.cells.empty()) continue;
        auto inside = [&](const Point& p) { return component_at(topo, p, c) == c.id; };
        for (std::size_t k = 0; k < c.cells.size(); k += std::max<std::size_t>(1, c.cells.size() / 10)) {
          CHECK_MESSAGE(in_attraction_basin(topo.field(), topo.geom(), filt.centers[c.cells[k]], inside), name);
          ++checked;
        }
      }
      CHECK(checked > 0);
    }
  }
}

TEST_SUITE("topology") {
  TEST_CASE("first-level wells are disjoint, interior and gated") {
    for (const auto& name : names(0)) {
      if (!a0_ok(name)) continue;
      auto w = wells_of(name);
      const auto& topo = *w.topology;
      std::set<int> seen;
      for (int id : topo.first_level_components()) {
        const auto& c = topo.component(id);
        CHECK_MESSAGE(!c.touches_boundary, name);
        for (int cell : c.cells) CHECK_MESSAGE(seen.insert(cell).second, name);
        bool gated = false;
        for (const auto& e : w.jmap.entries)
          if (e.component == id && e.k == 1) gated = !e.j.empty();
        CHECK_MESSAGE(gated, name);
      }
    }
  }

  TEST_CASE("a well holds an interior separating saddle exactly when it holds two minima") {
    for (const auto& name : names(0)) {
      if (!a0_ok(name)) continue;
      auto w = wells_of(name);
      const auto& topo = *w.topology;
      for (const auto& e : w.jmap.entries) {
        const auto& c = topo.component(e.component);
        bool inner = false;
        for (const auto& s : w.saddles) {
          if (s.kind != SeparatingSaddle::Kind::Interior) continue;
          const auto& z = topo.atlas().interior_criticals[s.ref];
          if (z.value < c.level && !topo.same_value(z.value, c.level) && component_at(topo, z.location, c) == c.id)
            inner = true;
        }
        CHECK_MESSAGE(inner == (c.contained_minima.size() >= 2), name);
      }
    }
  }

  TEST_CASE("inner wells are shallower than every first-level well") {
    for (const auto& name : names(0)) {
      if (!a0_ok(name)) continue;
      auto w = wells_of(name);
      double shallowest_first = 1e300;
      for (const auto& e : w.jmap.entries)
        if (e.k == 1) shallowest_first = std::min(shallowest_first, e.depth);
      for (const auto& e : w.jmap.entries)
        if (e.k > 1) CHECK_MESSAGE(e.depth < shallowest_first, name);
    }
  }

  TEST_CASE("exit heights on random instances match the minimax value") {
    std::mt19937_64 rng(50);
    struct Family {
      const char* name;
      const char* param;
      double lo, hi;
    };
    std::vector<Family> fam = {{"tilted_double_well", "c", -0.4, 0.4},
                               {"skewed_double_well", "c", 0.0, 0.3},
                               {"triple_well", "c", 0.05, 0.25},
                               {"mild_tilted_double_well", "t", -0.2, 0.2},
                               {"hip3", "c", -0.3, 0.1}};
    int done = 0, attempts = 0;
    while (done < 50 && attempts < 200) {
      const auto& fa = fam[attempts++ % fam.size()];
      double v = std::uniform_real_distribution<double>(fa.lo, fa.hi)(rng);
      auto f = make_field(catalog_spec(fa.name, {{fa.param, v}}));
      const auto& g = catalog_entry(fa.name).domain;
      auto atlas = build_atlas(*f, g);
      if (!atlas.a0_report.passed) continue;
      auto w = wells_of(f, g);
      const auto& topo = *w.topology;
      double gap = topo.filtration().value_gap;
      for (int m : atlas.minima()) {
        double x = atlas.interior_criticals[m].location[0];
        CHECK_MESSAGE(std::abs(topo.exit_height(m).value - minimax_1d(*f, g, x)) <= gap, fa.name << " " << v);
      }
      ++done;
    }
    CHECK(done == 50);
  }

  TEST_CASE("grid doubling moves depths by less than the coarse value gap") {
    for (const auto& name : names(1)) {
      if (!a0_ok(name)) continue;
      auto a = wells_of(name, 2048), b = wells_of(name, 4096);
      double gap = a.topology->filtration().value_gap;
      REQUIRE(a.jmap.entries.size() == b.jmap.entries.size());
      for (std::size_t i = 0; i < a.jmap.entries.size(); ++i)
        CHECK_MESSAGE(std::abs(a.jmap.entries[i].depth - b.jmap.entries[i].depth) < gap, name);
    }
  }
}

TEST_SUITE("asymptotics") {
  TEST_CASE("weights are positive and sum to one") {
    int covered = 0;
    for (const auto& name : names(0)) {
      if (!a0_ok(name)) continue;
      auto w = wells_of(name);
      if (!a13(w.report)) continue;
      auto wt = exit_weights(w);
      double sum = 0.0;
      for (const auto& e : wt) {
        CHECK_MESSAGE(e.a > 0.0, name);
        sum += e.a;
      }
      CHECK_MESSAGE(sum == doctest::Approx(1.0).epsilon(1e-14), name);
      ++covered;
    }
    CHECK(covered >= 6);
  }

  TEST_CASE("a steeper exit gate gets more weight") {
    // the cubic term shifts f'(-2) alone; f(+-2) and f'(2) stay put
    double last = -1.0;
    for (double c : {0.4, 0.2, 0.0, -0.2, -0.4}) {
      auto f = make_field(parse_potential("(x^2-1)^2 + c*(x+2)*(x-2)^2/16", {{"c", c}}));
      auto w = wells_of(f, DomainGeometry::interval(-2, 2));
      REQUIRE(a13(w.report));
      double left = 0.0;
      for (const auto& e : exit_weights(w))
        if (e.coordinate < 0) left = e.a;
      CHECK(left > last);
      last = left;
    }
  }

  TEST_CASE("log lambda falls linearly in 1/h with slope -2 depth") {
    for (const char* name : {"double_well", "tilted_double_well", "shallow_well"}) {
      auto w = wells_of(name);
      double depth = w.topology->depth_of(*w.report.cmax);
      std::vector<double> hs = {0.5, 0.4, 0.3}, logs;
      for (double h : hs) logs.push_back(principal_eigenvalue(w, h).log_lambda);
      CHECK(logs[1] < logs[0]);
      CHECK(logs[2] < logs[1]);
      double slope = (logs[2] - logs[1]) / (1 / hs[2] - 1 / hs[1]);
      CHECK_MESSAGE(slope == doctest::Approx(-2 * depth).epsilon(0.1), name);
    }
  }
}

TEST_SUITE("sampler") {
  TEST_CASE("halving dt moves the exit split by less than one Wilson sigma") {
    auto f = make_field(catalog_spec("mild_tilted_double_well"));
    auto g = catalog_entry("mild_tilted_double_well").domain;
    const double h = 0.5;
    // 16x the reference sample, noise on the shift about 0.35 sigma
    const long reference = 100000, n = 16 * reference;
    std::vector<double> p;
    for (double dt : {h / 100, h / 200}) {
      SimConfig c;
      c.h = h;
      c.dt = dt;
      c.n_paths = n;
      c.seed = 31;
      c.start = Point{g.a() + 0.25 * (g.b() - g.a()), 0.0};
      auto hist = aggregate(simulate_exit(*f, g, c), default_regions(g));
      p.push_back(hist.bins[0].p);
    }
    auto iv = wilson_interval(static_cast<long>(std::lround(p[0] * reference)), reference);
    double sigma = (iv.high - iv.low) / (2 * 1.96);
    CHECK(std::abs(p[0] - p[1]) < sigma);
  }
}

TEST_SUITE("spectral1d") {
  TEST_CASE("principal eigenvalue is positive and simple") {
    for (const char* name : {"double_well", "tilted_double_well", "triple_well", "hip4", "shallow_well"}) {
      auto f = make_field(catalog_spec(name));
      SpectralOptions o;
      o.k = 3;
      auto s = assemble_and_solve(*f, catalog_entry(name).domain, 0.4, o);
      REQUIRE(s.eigenvalues.size() == 3);
      CHECK(s.eigenvalues[0] > 0.0);
      CHECK(s.eigenvalues[0] < s.eigenvalues[1]);
      CHECK(s.eigenvalues[1] < s.eigenvalues[2]);
    }
  }

  TEST_CASE("flux through the endpoint off the deepest well dies out") {
    auto w = wells_of("tilted_double_well");
    REQUIRE(w.report.boundary_contacts.size() == 1);
    auto f = make_field(catalog_spec("tilted_double_well"));
    const auto& g = catalog_entry("tilted_double_well").domain;
    auto ratio = [&](double h) {
      auto e = exit_probabilities_spectral(assemble_and_solve(*f, g, h));
      return e.raw_right / e.raw_left;
    };
    CHECK(ratio(0.4) / ratio(0.25) >= 10.0);
  }
}

TEST_SUITE("oracle1d") {
  TEST_CASE("reflection swaps the pair") {
    for (const auto& name : names(1)) {
      const auto& e = catalog_entry(name);
      std::string mirrored = std::regex_replace(e.expression, std::regex("\\bx\\b"), "(0-x)");
      auto f = make_field(catalog_spec(name));
      auto r = make_field(parse_potential(mirrored, e.params));
      double a = e.domain.a(), b = e.domain.b();
      for (double frac : {0.2, 0.5, 0.9}) {
        double x = a + frac * (b - a);
        auto p = exit_prob_exact(*f, a, b, 0.3, x);
        auto q = exit_prob_exact(*r, -b, -a, 0.3, -x);
        CHECK_MESSAGE(p.p_left == doctest::Approx(q.p_right).epsilon(1e-10), name);
        CHECK_MESSAGE(p.p_right == doctest::Approx(q.p_left).epsilon(1e-10), name);
      }
    }
  }

  TEST_CASE("matches a million-point Simpson rule on the catalog") {
    const double h = 0.3;
    for (const auto& name : names(1)) {
      auto f = make_field(catalog_spec(name));
      const auto& g = catalog_entry(name).domain;
      const int n = 1000000;
      const double step = (g.b() - g.a()) / n;
      std::vector<double> fv(n + 1);
      double top = -1e300;
      for (int i = 0; i <= n; ++i) top = std::max(top, fv[i] = f->value({g.a() + i * step, 0}));
      // cumulative Simpson over pairs of intervals, so x sits on an even node
      std::vector<double> cum(n / 2 + 1, 0.0);
      for (int k = 0; k < n / 2; ++k) {
        auto w = [&](int i) { return std::exp(2 * (fv[i] - top) / h); };
        cum[k + 1] = cum[k] + step / 3 * (w(2 * k) + 4 * w(2 * k + 1) + w(2 * k + 2));
      }
      for (int k : {n / 10, n / 4, n / 2 - 2 * (n / 10)}) {
        double x = g.a() + 2 * k * step;
        double beyond = (cum.back() - cum[k]) / cum.back();
        double before = cum[k] / cum.back();
        auto p = exit_prob_exact(*f, g.a(), g.b(), h, x);
        CHECK_MESSAGE(p.p_left == doctest::Approx(beyond).epsilon(1e-8), name);
        CHECK_MESSAGE(p.p_right == doctest::Approx(before).epsilon(1e-8), name);
      }
    }
  }
}
