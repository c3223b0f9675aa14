#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "kramers/catalog.hpp"
#include "kramers/errors.hpp"
#include "kramers/topology.hpp"

using namespace kramers;

namespace {

WellDecomposition wells(const std::string& name, int resolution = 0) {
  auto f = make_field(catalog_spec(name));
  auto g = catalog_entry(name).domain;
  TopologyOptions t;
  t.resolution = resolution;
  return decompose(f, g, build_atlas(*f, g), t);
}

bool near(const Point& a, double x, double tol = 1e-6) { return std::abs(a[0] - x) < tol; }

bool has_witness(const Verdict& v, double x) {
  return std::any_of(v.witnesses.begin(), v.witnesses.end(), [&](const Point& p) { return near(p, x, 1e-3); });
}

// min over the two directions of the max of f along the way out
double minimax_1d(const PotentialField& f, const DomainGeometry& g, double x) {
  const int n = 200000;
  double left = -1e300, right = -1e300;
  for (int i = 0; i <= n; ++i) {
    double t = g.a() + (x - g.a()) * i / n;
    left = std::max(left, f.value({t, 0}));
    double s = x + (g.b() - x) * i / n;
    right = std::max(right, f.value({s, 0}));
  }
  return std::min(left, right);
}

}  // namespace

TEST_SUITE("topology") {
  TEST_CASE("canonical double well satisfies every assumption") {
    auto w = wells("double_well");
    const auto& r = w.report;
    CHECK(r.a1.value.value());
    CHECK(r.a2.value.value());
    CHECK(r.a3.value.value());
    CHECK(r.a4.value.value());
    REQUIRE(r.cmax);
    CHECK(r.boundary_contacts.size() == 2);
    for (int m : w.topology->atlas().minima()) CHECK(w.topology->exit_height(m).value == doctest::Approx(9.0));
  }

  TEST_CASE("tied wells break A1 and leave the rest unassessed") {
    auto w = wells("hip1");
    CHECK_FALSE(w.report.a1.value.value());
    CHECK(has_witness(w.report.a1, -1.0));
    CHECK(has_witness(w.report.a1, 1.0));
    CHECK_FALSE(w.report.a2.value.has_value());
    CHECK_FALSE(w.report.cmax.has_value());
  }

  TEST_CASE("deepest well sealed by an interior saddle breaks A2") {
    auto w = wells("hip2");
    CHECK(w.report.a1.value.value());
    CHECK_FALSE(w.report.a2.value.value());
    CHECK(has_witness(w.report.a2, 1.5));
  }

  TEST_CASE("contact above the boundary minimum breaks A3") {
    auto w = wells("hip3");
    CHECK(w.report.a2.value.value());
    CHECK_FALSE(w.report.a3.value.value());
    CHECK(has_witness(w.report.a3, 1.4));
  }

  TEST_CASE("interior saddle at the boundary level breaks A4") {
    auto w = wells("hip4");
    CHECK(w.report.a3.value.value());
    CHECK_FALSE(w.report.a4.value.value());
    CHECK(has_witness(w.report.a4, 0.0));
  }

  TEST_CASE("triple well labelling") {
    auto w = wells("triple_well");
    const auto& crit = w.topology->atlas().interior_criticals;
    REQUIRE(w.jmap.entries.size() == 3);
    const auto& top = w.jmap.entries[0];
    CHECK(top.k == 1);
    REQUIRE(top.j.size() == 2);
    for (int s : top.j) CHECK(w.saddles[s].kind == SeparatingSaddle::Kind::Boundary);
    for (int i = 1; i < 3; ++i) {
      const auto& e = w.jmap.entries[i];
      CHECK(e.k == i + 1);
      CHECK(e.l == 1);
      REQUIRE(e.j.size() == 1);
      CHECK(w.saddles[e.j[0]].kind == SeparatingSaddle::Kind::Interior);
    }
    CHECK(near(crit[top.minimum].location, -1.4847618, 1e-4));
  }

  TEST_CASE("exit heights match the minimax path value") {
    for (const char* name : {"triple_well", "hip2", "hip3", "double_well"}) {
      auto w = wells(name);
      const auto& topo = *w.topology;
      double gap = topo.filtration().value_gap;
      for (int m : topo.atlas().minima()) {
        double x = topo.atlas().interior_criticals[m].location[0];
        double want = minimax_1d(topo.field(), topo.geom(), x);
        CHECK(std::abs(topo.exit_height(m).value - want) <= gap);
      }
    }
  }

  TEST_CASE("grid doubling keeps every verdict") {
    for (const char* name : {"double_well", "hip1", "hip2", "hip3", "hip4", "triple_well", "two_well_2d"}) {
      bool two_d = catalog_entry(name).dimension == 2;
      auto a = wells(name, two_d ? 128 : 2048);
      auto b = wells(name, two_d ? 256 : 4096);
      auto same = [](const Verdict& x, const Verdict& y) { return x.value == y.value; };
      CHECK_MESSAGE(same(a.report.a1, b.report.a1), name);
      CHECK_MESSAGE(same(a.report.a2, b.report.a2), name);
      CHECK_MESSAGE(same(a.report.a3, b.report.a3), name);
      CHECK_MESSAGE(same(a.report.a4, b.report.a4), name);
    }
  }

  TEST_CASE("coarse grids are refused") {
    CHECK_THROWS_AS(wells("double_well", 16), Error);
  }

  TEST_CASE("sublevel queries") {
    auto w = wells("double_well");
    const auto& topo = *w.topology;
    int q = topo.query_below(1.0);
    int left = topo.attach({-1.0, 0.0}, q), right = topo.attach({1.0, 0.0}, q);
    CHECK(left >= 0);
    CHECK(right >= 0);
    CHECK(left != right);
    int q2 = topo.query_above(1.0);
    CHECK(topo.attach({-1.0, 0.0}, q2) == topo.attach({1.0, 0.0}, q2));
  }

  TEST_CASE("2D two-well disc drains towards its deeper boundary minimum") {
    auto w = wells("two_well_2d");
    CHECK(w.report.a1.value.value());
    REQUIRE(w.report.boundary_contacts.size() == 1);
    const auto& b = w.topology->atlas().boundary_saddles[w.report.boundary_contacts[0]];
    CHECK(b.location[0] < 0.0);
  }
}
