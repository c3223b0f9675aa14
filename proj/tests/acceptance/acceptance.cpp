#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "app.hpp"
#include "config.hpp"
#include "kramers/asymptotics.hpp"
#include "kramers/catalog.hpp"
#include "kramers/errors.hpp"
#include "kramers/oracle1d.hpp"
#include "kramers/sampler.hpp"
#include "kramers/spectral1d.hpp"
#include "kramers/topology.hpp"

using namespace kramers;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Log {
  Outcome out;
  std::ostringstream s;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      out.pass = false;
      s << "[X] ";
    }
    s << what << "; ";
  }
  Outcome done() {
    out.detail = s.str();
    if (out.detail.size() >= 2) out.detail.resize(out.detail.size() - 2);
    return out;
  }
};

std::string fmt(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Setup {
  FieldPtr field;
  DomainGeometry geom;
  WellDecomposition w;
};

Setup setup(const std::string& name, int resolution = 0) {
  auto f = make_field(catalog_spec(name));
  auto g = catalog_entry(name).domain;
  TopologyOptions t;
  t.resolution = resolution;
  return {f, g, decompose(f, g, build_atlas(*f, g), t)};
}

std::vector<std::optional<bool>> verdict_values(const AssumptionReport& r) {
  return {r.a0.value, r.a1.value, r.a2.value, r.a3.value, r.a4.value};
}

bool witnessed(const Verdict& v, double x) {
  return std::any_of(v.witnesses.begin(), v.witnesses.end(),
                     [&](const Point& p) { return std::abs(p[0] - x) < 1e-3; });
}

double minimax_1d(const PotentialField& f, const DomainGeometry& g, double x) {
  const int n = 200000;
  double left = -1e300, right = -1e300;
  for (int i = 0; i <= n; ++i) {
    left = std::max(left, f.value({g.a() + (x - g.a()) * i / n, 0}));
    right = std::max(right, f.value({x + (g.b() - x) * i / n, 0}));
  }
  return std::min(left, right);
}

SimConfig mc(double h, long n, std::uint64_t seed) {
  SimConfig c;
  c.h = h;
  c.dt = h / 100.0;
  c.n_paths = n;
  c.seed = seed;
  return c;
}

// two-sample check on one bin
bool within_joint(const HistogramBin& a, long na, const HistogramBin& b, long nb, double k, double* z) {
  double var = a.p * (1 - a.p) / na + b.p * (1 - b.p) / nb;
  double sd = std::sqrt(std::max(var, 1e-300));
  *z = std::abs(a.p - b.p) / sd;
  return std::abs(a.p - b.p) <= k * sd;
}

Outcome criterion1() {
  Log log;
  auto t0 = std::chrono::steady_clock::now();
  int worst_case = 0;
  double worst = 0.0;
  for (const char* name : {"flat", "linear_drift", "cosine_ripple", "mild_double_well", "mild_tilted_double_well"}) {
    auto f = make_field(catalog_spec(name));
    auto g = catalog_entry(name).domain;
    for (double h : {0.3, 0.5}) {
      for (double frac : {0.25, 0.5, 0.75}) {
        double x = g.a() + frac * (g.b() - g.a());
        auto exact = exit_prob_exact(*f, g.a(), g.b(), h, x);
        auto c = mc(h, 100000, 7);
        c.start = Point{x, 0.0};
        auto hist = aggregate(simulate_exit(*f, g, c), default_regions(g));
        const auto& left = hist.bins[0];
        auto iv = wilson_interval(left.count, hist.n, 3.0);
        bool ok = exact.p_left >= iv.low && exact.p_left <= iv.high && hist.censored == 0;
        double sig = (wilson_interval(left.count, hist.n).high - wilson_interval(left.count, hist.n).low) / (2 * 1.96);
        double z = std::abs(left.p - exact.p_left) / std::max(sig, 1e-300);
        worst = std::max(worst, z);
        ++worst_case;
        if (!ok)
          log.check(false, std::string(name) + " h=" + fmt(h) + " x=" + fmt(x) + ": mc " + fmt(left.p) + " oracle " +
                               fmt(exact.p_left));
      }
    }
  }
  double secs = seconds_since(t0);
  log.check(true, std::to_string(worst_case) + " cases, largest deviation " + fmt(worst, 3) + " sigma");
  log.check(secs <= 120.0, "runtime " + fmt(secs, 3) + " s (limit 120)");
  return log.done();
}

Outcome criterion2() {
  Log log;
  auto s = setup("tilted_double_well");
  auto weights = exit_weights(s.w);
  for (auto [h, tol] : {std::pair{0.1, 0.10}, std::pair{0.05, 0.05}}) {
    auto spec = assemble_and_solve(*s.field, s.geom, h);
    auto exact = qsd_exit_prob_exact(*s.field, spec);
    for (const auto& wt : weights) {
      double p = wt.coordinate < 0 ? exact.p_left : exact.p_right;
      // a zero weight has no relative scale; compare against the total mass instead
      double err = wt.a > 0 ? std::abs(p - wt.a) / wt.a : std::abs(p);
      log.check(err <= tol, "h=" + fmt(h) + " z=" + fmt(wt.coordinate) + " a=" + fmt(wt.a) + " oracle " + fmt(p) +
                                " err " + fmt(err, 3) + " (tol " + fmt(tol) + ")");
    }
  }
  return log.done();
}

Outcome criterion3() {
  Log log;
  auto s = setup("double_well");
  std::vector<double> rates;
  for (double h : {0.5, 0.4, 0.3, 0.25}) {
    auto spec = assemble_and_solve(*s.field, s.geom, h);
    double r = -h * std::log(spec.eigenvalues[0]);
    rates.push_back(r);
    log.check(std::isfinite(r), "h=" + fmt(h) + " -h ln lambda " + fmt(r));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < rates.size(); ++i)
    monotone = monotone && rates[i] > rates[i - 1] && std::abs(rates[i] - 18) < std::abs(rates[i - 1] - 18);
  log.check(monotone, "monotone toward 18");
  double err = std::abs(rates.back() - 18.0) / 18.0;
  log.check(err <= 0.15, "relative error at h=0.25 " + fmt(err, 3));
  return log.done();
}

Outcome criterion4() {
  Log log;
  auto s = setup("shallow_well");
  const auto& topo = *s.w.topology;
  double depth = s.w.report.cmax ? topo.depth_of(*s.w.report.cmax) : NAN;
  log.check(depth <= 2.0, "depth " + fmt(depth));
  auto pe = principal_eigenvalue(s.w, 0.3);
  auto spec = assemble_and_solve(*s.field, s.geom, 0.3);
  double ratio = spec.eigenvalues[0] / pe.lambda;
  log.check(ratio >= 0.8 && ratio <= 1.2, "lambda " + fmt(spec.eigenvalues[0]) + " formula " + fmt(pe.lambda) + " (" +
                                              regime_name(pe.regime) + ") ratio " + fmt(ratio, 4));
  return log.done();
}

Outcome criterion5() {
  Log log;
  auto s = setup("double_well");
  double g5 = assemble_and_solve(*s.field, s.geom, 0.5).gap_ratio();
  double g3 = assemble_and_solve(*s.field, s.geom, 0.3).gap_ratio();
  log.check(g5 / g3 >= 10.0, "gap ratio " + fmt(g5) + " at 0.5, " + fmt(g3) + " at 0.3, factor " + fmt(g5 / g3, 3));
  return log.done();
}

Outcome criterion6() {
  Log log;
  {
    auto s = setup("hip4");
    const auto& topo = *s.w.topology;
    if (!s.w.report.cmax) {
      log.check(false, "hip4 has no C_max");
      return log.done();
    }
    const auto& comp = topo.component(*s.w.report.cmax);
    const auto& filt = topo.filtration();
    double lo = 1e300, hi = -1e300;
    for (int cell : comp.cells) {
      lo = std::min(lo, filt.centers[cell][0] - filt.hx / 2);
      hi = std::max(hi, filt.centers[cell][0] + filt.hx / 2);
    }
    auto nu = qsd_density(assemble_and_solve(*s.field, s.geom, 0.2));
    double mass = nu.mass_between(lo, hi);
    log.check(mass > 0.95, "hip4 nu mass on C_max cells [" + fmt(lo, 4) + ", " + fmt(hi, 4) + "] " + fmt(mass, 5));
  }
  {
    auto s = setup("double_well");
    auto nu = qsd_density(assemble_and_solve(*s.field, s.geom, 0.2));
    const auto& atlas = s.w.topology->atlas();
    double saddle = 0.0;
    for (const auto& c : atlas.interior_criticals)
      if (c.index == 1) saddle = c.location[0];
    double l = nu.mass_between(s.geom.a(), saddle), r = nu.mass_between(saddle, s.geom.b());
    log.check(std::abs(l - 0.5) <= 1e-4 && std::abs(r - 0.5) <= 1e-4,
              "double well basin masses " + fmt(l, 8) + ", " + fmt(r, 8));
  }
  return log.done();
}

Outcome criterion7() {
  Log log;
  auto s = setup("hip4");
  const auto& topo = *s.w.topology;
  double x = topo.atlas().interior_criticals[topo.argmin_of(*s.w.report.cmax)].location[0];
  std::vector<double> errs;
  double constant = 0.0;
  for (double h : {0.05, 0.02, 0.01}) {
    auto c = laplace_crossing_asymptotic(s.w, h);
    constant = c.constant;
    auto p = exit_prob_exact(*s.field, s.geom.a(), s.geom.b(), h, x);
    double far = c.far_end > c.near_end ? p.p_right : p.p_left;
    double ratio = far / std::sqrt(h);
    errs.push_back(std::abs(ratio - c.constant) / c.constant);
    log.check(true, "h=" + fmt(h) + " p/sqrt(h) " + fmt(ratio) + " err " + fmt(errs.back(), 3));
  }
  log.check(true, "start " + fmt(x) + ", constant " + fmt(constant));
  log.check(errs[2] < errs[0], "error shrinks from h=0.05 to h=0.01");
  log.check(errs[1] <= errs[0] && errs[2] <= errs[1], "monotone over the three values");
  log.check(errs[2] < 0.10, "below 10% at h=0.01");
  return log.done();
}

Outcome criterion8() {
  Log log;
  auto s = setup("triple_well");
  const auto& topo = *s.w.topology;
  const auto& e = s.w.jmap.entries;
  log.check(e.size() == 3, std::to_string(e.size()) + " j-map entries");
  if (e.size() != 3) return log.done();
  auto kinds = [&](const JEntry& j) {
    int b = 0, i = 0;
    for (int k : j.j) (s.w.saddles[k].kind == SeparatingSaddle::Kind::Boundary ? b : i)++;
    return std::pair{b, i};
  };
  auto [b1, i1] = kinds(e[0]);
  log.check(e[0].k == 1 && e[0].l == 1 && b1 == 2 && i1 == 0, "j(x_{1,1}) has " + std::to_string(b1) +
                                                                   " boundary and " + std::to_string(i1) +
                                                                   " interior saddles");
  for (int n = 1; n < 3; ++n) {
    auto [b, i] = kinds(e[n]);
    std::string label = "x_{" + std::to_string(e[n].k) + "," + std::to_string(e[n].l) + "}";
    log.check(e[n].k == n + 1 && e[n].l == 1 && b == 0 && i == 1,
              "j(" + label + ") has " + std::to_string(i) + " interior saddle");
  }
  double gap = topo.filtration().value_gap;
  for (int m : topo.atlas().minima()) {
    double x = topo.atlas().interior_criticals[m].location[0];
    double hf = topo.exit_height(m).value, want = minimax_1d(topo.field(), topo.geom(), x);
    log.check(std::abs(hf - want) <= gap,
              "H_f(" + fmt(x, 4) + ") " + fmt(hf) + " minimax " + fmt(want) + " gap " + fmt(gap, 3));
  }
  return log.done();
}

Outcome criterion9() {
  Log log;
  auto expect = [&](const char* name, int clause, std::vector<double> witnesses) {
    auto s = setup(name);
    auto v = verdict_values(s.w.report);
    const Verdict* vs[] = {&s.w.report.a0, &s.w.report.a1, &s.w.report.a2, &s.w.report.a3, &s.w.report.a4};
    bool earlier = true;
    for (int i = 0; i < clause; ++i) earlier = earlier && v[i] && *v[i];
    bool fails = v[clause] && !*v[clause];
    bool seen = true;
    for (double x : witnesses) seen = seen && witnessed(*vs[clause], x);
    std::string wit;
    for (const auto& p : vs[clause]->witnesses) wit += (wit.empty() ? "" : ",") + fmt(p[0], 4);
    log.check(earlier && fails && seen, std::string(name) + ": A" + std::to_string(clause) + " " +
                                            (fails ? "false" : "not false") + ", witnesses {" + wit + "}");
  };
  expect("hip1", 1, {-1.0, 1.0});
  expect("hip2", 2, {1.5});
  expect("hip3", 3, {1.4});
  expect("hip4", 4, {0.0});
  return log.done();
}

Outcome criterion10() {
  Log log;
  const double h = 0.3;
  const long n = 100000;
  auto s = setup("harmonic_tilted");
  const auto& topo = *s.w.topology;
  int cmax = *s.w.report.cmax;
  double level = topo.component(cmax).level;
  double xmin = topo.atlas().interior_criticals[topo.argmin_of(cmax)].location[0];
  std::vector<double> starts = {xmin, xmin + 0.15};
  auto regions = default_regions(s.geom);
  std::vector<ExitHistogram> hists;
  auto t0 = std::chrono::steady_clock::now();
  for (double x : starts) {
    log.check(s.field->value({x, 0}) < level, "start " + fmt(x, 4) + " inside C_max");
    auto c = mc(h, n, 11 + hists.size());
    c.start = Point{x, 0.0};
    hists.push_back(aggregate(simulate_exit(*s.field, s.geom, c), regions));
  }
  auto c = mc(h, n, 13);
  c.burn_in = QsdBurnIn{5.0, {xmin, 0.0}};
  hists.push_back(aggregate(simulate_exit(*s.field, s.geom, c), regions));
  auto compare = [&](int i, int j, const std::string& what) {
    bool ok = true;
    std::string zs;
    for (std::size_t b = 0; b < regions.size(); ++b) {
      double z = 0;
      ok = within_joint(hists[i].bins[b], hists[i].n, hists[j].bins[b], hists[j].n, 3.0, &z) && ok;
      zs += (zs.empty() ? "" : ",") + fmt(z, 3);
    }
    log.check(ok, what + " z {" + zs + "}");
  };
  for (std::size_t i = 0; i < hists.size(); ++i)
    log.check(hists[i].censored == 0, "run " + std::to_string(i) + " p_left " + fmt(hists[i].bins[0].p));
  compare(0, 1, "start vs start");
  compare(2, 0, "QSD vs first start");
  compare(2, 1, "QSD vs second start");
  log.check(true, "runtime " + fmt(seconds_since(t0), 3) + " s");
  return log.done();
}

Outcome criterion11() {
  Log log;
  const double h = 0.35;
  auto s = setup("harmonic_tilted");
  const auto& topo = *s.w.topology;
  double xmin = topo.atlas().interior_criticals[topo.argmin_of(*s.w.report.cmax)].location[0];
  auto c = mc(h, 100000, 17);
  c.burn_in = QsdBurnIn{5.0, {xmin, 0.0}};
  auto t0 = std::chrono::steady_clock::now();
  auto r = simulate_exit(*s.field, s.geom, c);
  auto rep = independence_check(r, default_regions(s.geom));
  log.check(std::abs(rep.correlation) < rep.correlation_threshold,
            "corr " + fmt(rep.correlation, 3) + " vs " + fmt(rep.correlation_threshold, 3));
  log.check(rep.ks < rep.ks_threshold, "KS " + fmt(rep.ks, 3) + " vs " + fmt(rep.ks_threshold, 3));
  log.check(true, "n " + std::to_string(rep.n) + ", mean tau " + fmt(rep.mean_tau, 4) + ", runtime " +
                      fmt(seconds_since(t0), 3) + " s");
  return log.done();
}

Outcome criterion12() {
  Log log;
  // gradients
  {
    std::mt19937_64 rng(12);
    double worst = 0.0;
    std::string where;
    for (const auto& e : catalog()) {
      auto f = make_field(catalog_spec(e.name));
      auto box = e.domain.bounding_box();
      std::uniform_real_distribution<double> ux(box[0], box[1]), uy(box[2], box[3]);
      int got = 0;
      while (got < 100) {
        Point p{ux(rng), e.dimension == 2 ? uy(rng) : 0.0};
        if (!e.domain.contains(p)) continue;
        ++got;
        Point g;
        f->gradient(p, g);
        for (int d = 0; d < e.dimension; ++d) {
          double step = 1e-5 * std::max(1.0, std::abs(p[d]));
          Point a = p, b = p;
          a[d] += step;
          b[d] -= step;
          double fd = (f->value(a) - f->value(b)) / (2 * step);
          double err = std::abs(fd - g[d]) / std::max(1.0, std::abs(g[d]));
          if (err > worst) {
            worst = err;
            where = e.name;
          }
        }
      }
    }
    log.check(worst < 1e-6, "AD vs FD worst relative " + fmt(worst, 3) + " (" + where + ")");
  }
  // threads
  {
    auto f = make_field(catalog_spec("mild_double_well"));
    auto g = catalog_entry("mild_double_well").domain;
    auto c = mc(0.5, 4000, 5);
    c.burn_in = QsdBurnIn{2.0, {-1.0, 0.0}};
    std::vector<SimResult> runs;
    for (int t : {1, 3, 8}) {
      c.threads = t;
      runs.push_back(simulate_exit(*f, g, c));
    }
    bool same = true;
    for (std::size_t k = 1; k < runs.size(); ++k) {
      same = same && runs[k].records.size() == runs[0].records.size();
      for (std::size_t i = 0; same && i < runs[0].records.size(); ++i) {
        const auto &x = runs[0].records[i], &y = runs[k].records[i];
        same = x.exit_time == y.exit_time && x.exit_point == y.exit_point && x.censored == y.censored;
      }
      same = same && runs[k].burn_attempts == runs[0].burn_attempts;
    }
    log.check(same, "records identical across 1, 3 and 8 threads");
  }
  // shift
  {
    double worst = 0.0;
    bool verdicts = true;
    for (const char* name : {"double_well", "tilted_double_well", "triple_well", "shallow_well", "hip4",
                              "harmonic_tilted", "two_well_2d"}) {
      auto spec = catalog_spec(name);
      auto g = catalog_entry(name).domain;
      auto f0 = make_field(spec), f7 = make_shifted(spec, 7.0);
      auto w0 = decompose(f0, g, build_atlas(*f0, g)), w7 = decompose(f7, g, build_atlas(*f7, g));
      verdicts = verdicts && verdict_values(w0.report) == verdict_values(w7.report);
      for (double h : {0.2, 0.3}) {
        auto p0 = predict(w0, h), p7 = predict(w7, h);
        if (p0.weights.size() != p7.weights.size()) {
          worst = 1.0;
          continue;
        }
        for (std::size_t i = 0; i < p0.weights.size(); ++i) {
          worst = std::max(worst, std::abs(p0.weights[i].a - p7.weights[i].a));
          worst = std::max(worst, std::abs(p0.weights[i].coordinate - p7.weights[i].coordinate));
        }
        worst = std::max(worst, std::abs(p0.eigenvalue.log_lambda - p7.eigenvalue.log_lambda) /
                                    std::max(1.0, std::abs(p0.eigenvalue.log_lambda)));
      }
    }
    log.check(verdicts, "verdicts unchanged under f + 7");
    log.check(worst <= 1e-9, "largest prediction change under f + 7 " + fmt(worst, 3));
  }
  // grid doubling
  {
    bool same = true;
    std::string changed, refused;
    int count = 0;
    for (const auto& e : catalog()) {
      int base = e.dimension == 2 ? 128 : 2048;
      // refusals compare by kind
      auto run = [&](int res) -> std::pair<std::vector<std::optional<bool>>, std::string> {
        try {
          return {verdict_values(setup(e.name, res).w.report), ""};
        } catch (const Error& err) {
          return {{}, kind_name(err.kind())};
        }
      };
      auto a = run(base), b = run(2 * base);
      ++count;
      if (a != b) {
        same = false;
        changed += " " + e.name;
      } else if (!a.second.empty()) {
        refused += " " + e.name + "(" + a.second + ")";
      }
    }
    log.check(same, "verdicts unchanged by grid doubling on " + std::to_string(count) + " entries" +
                        (changed.empty() ? "" : ", differ:" + changed) +
                        (refused.empty() ? "" : ", refused on both:" + refused));
  }
  return log.done();
}

Outcome criterion13() {
  Log log;
  auto t0 = std::chrono::steady_clock::now();
  Model m(parse_config(R"({"potential": {"catalog": "two_well_2d"}})"));
  auto w = m.decomposition();
  auto r = run_simulate(m, {{"h", 0.2}, {"paths", 10000}, {"seed", 7}});
  double mass = 0.0;
  std::string names;
  for (int contact : w->report.boundary_contacts) {
    std::string name = "z" + std::to_string(contact);
    names += " " + name;
    for (const auto& b : r.data["bins"])
      if (b["name"] == name) mass += b["p"].get<double>();
  }
  double secs = seconds_since(t0);
  log.check(!w->report.boundary_contacts.empty(), "contact arcs" + names);
  log.check(mass >= 0.9, "mass on contact arcs " + fmt(mass, 4) + " of n " + r.data["n"].dump());
  log.check(secs <= 600.0, "runtime " + fmt(secs, 3) + " s (limit 600)");
  return log.done();
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> all = {
      {"exit splits match the exact oracle", criterion1},
      {"QSD exit probabilities approach the exit weights", criterion2},
      {"eigenvalue rate tends to twice the depth", criterion3},
      {"eigenvalue prefactor on a shallow well", criterion4},
      {"spectral gap opens", criterion5},
      {"QSD concentrates in the deepest well", criterion6},
      {"square-root crossing law", criterion7},
      {"triple-well labelling and exit heights", criterion8},
      {"assumption counterexamples", criterion9},
      {"exit law does not depend on the start", criterion10},
      {"exit time and exit point are independent", criterion11},
      {"infrastructure properties", criterion12},
      {"2D exits concentrate on the contacts", criterion13},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run one criterion")->check(CLI::Range(1, 13));
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  const auto& list = criteria();
  for (std::size_t i = 0; i < list.size(); ++i) {
    int id = static_cast<int>(i) + 1;
    if (only && id != only) continue;
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      o = list[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::printf("%s criterion %d: %s (%.1f s) | %s\n", o.pass ? "PASS" : "FAIL", id, list[i].first.c_str(),
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
