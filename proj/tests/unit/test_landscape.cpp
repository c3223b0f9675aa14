#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "kramers/catalog.hpp"
#include "kramers/errors.hpp"
#include "kramers/landscape.hpp"

using namespace kramers;

namespace {

LandscapeAtlas atlas_of(const std::string& name) {
  auto f = make_field(catalog_spec(name));
  return build_atlas(*f, catalog_entry(name).domain);
}

LandscapeAtlas atlas_of(const std::string& expr, const DomainGeometry& g) {
  auto f = make_field(parse_potential(expr));
  return build_atlas(*f, g);
}

}  // namespace

TEST_SUITE("landscape") {
  TEST_CASE("double well criticals and boundary saddles") {
    auto a = atlas_of("double_well");
    CHECK(a.a0_report.passed);
    REQUIRE(a.interior_criticals.size() == 3);
    auto mins = a.minima();
    REQUIRE(mins.size() == 2);
    for (int i : mins) {
      CHECK(std::abs(a.interior_criticals[i].location[0]) == doctest::Approx(1.0));
      CHECK(a.interior_criticals[i].hessian_det == doctest::Approx(8.0));
    }
    int saddles = 0;
    for (const auto& c : a.interior_criticals)
      if (c.index == 1) {
        ++saddles;
        CHECK(c.location[0] == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(c.value == doctest::Approx(1.0));
      }
    CHECK(saddles == 1);
    REQUIRE(a.boundary_saddles.size() == 2);
    for (const auto& b : a.boundary_saddles) {
      CHECK(b.value == doctest::Approx(9.0));
      CHECK(b.normal_derivative == doctest::Approx(24.0));
    }
  }

  TEST_CASE("critical points are sorted by location and value reproducibly") {
    auto a = atlas_of("triple_well");
    auto b = atlas_of("triple_well");
    REQUIRE(a.interior_criticals.size() == b.interior_criticals.size());
    for (std::size_t i = 0; i < a.interior_criticals.size(); ++i)
      CHECK(a.interior_criticals[i].location[0] == b.interior_criticals[i].location[0]);
    CHECK(a.minima().size() == 3);
  }

  TEST_CASE("degenerate minimum fails the Morse clause") {
    auto a = atlas_of("x^4", DomainGeometry::interval(-1, 1));
    CHECK_FALSE(a.a0_report.passed);
    bool morse_failed = false;
    for (const auto& c : a.a0_report.clauses)
      if (c.name == "interior_morse") morse_failed = !c.passed;
    CHECK(morse_failed);
  }

  TEST_CASE("a monotone potential has no minimum") {
    auto a = atlas_of("x", DomainGeometry::interval(-1, 1));
    CHECK_FALSE(a.a0_report.passed);
    auto f = make_field(parse_potential("x"));
    CHECK_THROWS_AS(find_critical_points(*f, DomainGeometry::interval(-1, 1), 16), Error);
  }

  TEST_CASE("vanishing boundary gradient is reported") {
    auto a = atlas_of("(x^2-1)^2", DomainGeometry::interval(-1, 1.5));
    CHECK_FALSE(a.a0_report.passed);
  }

  TEST_CASE("2D double well on a disc") {
    auto a = atlas_of("double_well_2d");
    CHECK(a.a0_report.passed);
    CHECK(a.minima().size() == 2);
    int saddles = 0;
    for (const auto& c : a.interior_criticals) saddles += c.index == 1;
    CHECK(saddles == 1);
    CHECK(a.boundary_saddles.size() == 4);
    for (const auto& b : a.boundary_saddles) CHECK(b.normal_derivative > 0.0);
  }

  TEST_CASE("gradient-flow basin membership") {
    auto f = make_field(catalog_spec("double_well"));
    auto g = catalog_entry("double_well").domain;
    auto right = [](const Point& p) { return std::abs(p[0] - 1.0) < 0.05; };
    CHECK(in_attraction_basin(*f, g, {0.4, 0.0}, right));
    CHECK_FALSE(in_attraction_basin(*f, g, {-0.4, 0.0}, right));
    CHECK(in_attraction_basin(*f, g, {1.99, 0.0}, right));
  }
}
