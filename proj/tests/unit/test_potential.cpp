#include <cmath>
#include <random>

#include "doctest.h"
#include "kramers/catalog.hpp"
#include "kramers/errors.hpp"
#include "kramers/potential.hpp"

using namespace kramers;

namespace {

ErrorKind kind_of(const std::string& text, const std::map<std::string, double>& params = {}) {
  try {
    parse_potential(text, params);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error for " << text);
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("potential") {
  TEST_CASE("quartic evaluates with gradient and hessian") {
    auto spec = parse_potential("(x^2-1)^2");
    auto f = make_field(spec);
    auto e = f->eval({0.5, 0.0});
    CHECK(e.value == doctest::Approx(0.5625));
    CHECK(e.gradient[0] == doctest::Approx(4 * 0.5 * (0.25 - 1)));
    CHECK(e.hessian[0] == doctest::Approx(12 * 0.25 - 4));
  }

  TEST_CASE("parameters bind and y selects two dimensions") {
    auto spec = parse_potential("a*x^2 + b*y^2", {{"a", 2.0}, {"b", 3.0}});
    CHECK(spec.dimension == 2);
    auto f = make_field(spec);
    CHECK(f->value({1.0, 2.0}) == doctest::Approx(14.0));
  }

  TEST_CASE("syntax errors report a position") {
    try {
      parse_potential("x^2 + * 3");
      FAIL("accepted bad text");
    } catch (const SyntaxError& e) {
      CHECK(e.position() == 6);
      CHECK_FALSE(e.expected().empty());
    }
    CHECK(kind_of("(x+1") == ErrorKind::SyntaxError);
  }

  TEST_CASE("unknown names and rough functions are rejected") {
    CHECK(kind_of("x + z") == ErrorKind::UnknownIdentifier);
    CHECK(kind_of("abs(x)") == ErrorKind::NonSmoothFunction);
    CHECK(kind_of("a*x", {}) == ErrorKind::UnknownIdentifier);
  }

  TEST_CASE("printing and reparsing keeps the tree") {
    for (const auto& e : catalog()) {
      auto spec = catalog_spec(e.name);
      auto again = reparse(spec);
      REQUIRE(spec.expression);
      CHECK(spec.expression->same_tree(*again.expression));
    }
  }

  TEST_CASE("automatic gradients agree with central differences on every catalog entry") {
    std::mt19937_64 rng(11);
    for (const auto& entry : catalog()) {
      auto f = make_field(catalog_spec(entry.name));
      auto box = entry.domain.bounding_box();
      std::uniform_real_distribution<double> ux(box[0], box[1]), uy(box[2], box[3]);
      int done = 0;
      while (done < 100) {
        Point p{ux(rng), entry.dimension == 2 ? uy(rng) : 0.0};
        if (!entry.domain.contains(p)) continue;
        ++done;
        Point g;
        f->gradient(p, g);
        for (int k = 0; k < entry.dimension; ++k) {
          double step = 1e-6 * std::max(1.0, std::abs(p[k]));
          Point a = p, b = p;
          a[k] += step;
          b[k] -= step;
          double fd = (f->value(a) - f->value(b)) / (2 * step);
          double scale = std::max({1.0, std::abs(g[k]), std::abs(fd)});
          CHECK(std::abs(fd - g[k]) / scale < 1e-6);
        }
      }
    }
  }

  TEST_CASE("shifted fields differ by the constant only") {
    auto spec = catalog_spec("tilted_double_well");
    auto f = make_field(spec);
    auto g = make_shifted(spec, 7.0);
    for (double x : {-1.5, -0.2, 0.7}) {
      CHECK(g->value({x, 0}) == doctest::Approx(f->value({x, 0}) + 7.0));
      CHECK(g->eval({x, 0}).gradient[0] == doctest::Approx(f->eval({x, 0}).gradient[0]));
    }
  }

  TEST_CASE("evaluate refuses points outside the domain") {
    auto f = make_field(catalog_spec("double_well"));
    auto dom = catalog_entry("double_well").domain;
    CHECK_THROWS_AS(evaluate(*f, dom, {3.0, 0.0}), Error);
    CHECK(boundary_normal_derivative(*f, dom, {2.0, 0.0}) == doctest::Approx(24.0));
    CHECK(boundary_normal_derivative(*f, dom, {-2.0, 0.0}) == doctest::Approx(24.0));
  }

  TEST_CASE("catalog overrides and unknown names") {
    auto s = catalog_spec("tilted_double_well", {{"c", 0.3}});
    CHECK(s.params.at("c") == doctest::Approx(0.3));
    CHECK_THROWS_AS(catalog_spec("tilted_double_well", {{"nope", 1.0}}), Error);
    CHECK_THROWS_AS(catalog_entry("no_such_entry"), Error);
  }
}
