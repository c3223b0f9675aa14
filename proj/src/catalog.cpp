#include "kramers/catalog.hpp"

#include <cmath>
#include <functional>

#include "field_impl.hpp"
#include "kramers/errors.hpp"

namespace kramers {

namespace {

std::vector<CatalogEntry> build_catalog() {
  auto I = [](double a, double b) { return DomainGeometry::interval(a, b); };
  auto B = [](double cx, double cy, double r) { return DomainGeometry::ball({cx, cy}, r); };
  const double s2 = std::sqrt(2.0);
  return {
      {"double_well", 1, "(x^2-1)^2", {}, I(-2, 2), "symmetric double well, both wells reach the boundary"},
      {"tilted_double_well", 1, "(x^2-1)^2 + c*x", {{"c", 0.2}}, I(-2, 2), "double well with a linear tilt"},
      {"skewed_double_well", 1, "(x^2-1)^2 + c*(x^3-4*x)", {{"c", 0.25}}, I(-2, 2),
       "wells of unequal depth, equal boundary values, unequal boundary slopes"},
      {"hip1", 1, "(x^2-1)^2", {}, I(-1.2, 1.2), "two wells of equal depth draining to opposite ends"},
      {"hip2", 1, "-0.8*x^5 + x^4 + 23/12*x^3 - 27/16*x^2 - 1.125*x", {}, I(-1.14, 1.67),
       "deepest well enclosed by an interior barrier"},
      {"hip3", 1, "(x^2-1)^2 + c*x", {{"c", -0.2}}, I(-1.2, 1.4),
       "deepest well touches the boundary above its minimum"},
      {"hip4", 1, "(x^2-1)^2 + c*x^3*(x^2-2)", {{"c", -0.1}}, I(-s2, s2),
       "interior saddle at the level of the boundary"},
      {"triple_well", 1, "x^6/6 - x^5/10 - 11*x^4/16 + 3*x^3/8 + 9*x^2/16 - c*x", {{"c", 0.16524}}, I(-1.8, 1.8),
       "three nested wells"},
      {"shallow_well", 1, "k*x^2", {{"k", 3.0}}, I(-0.8, 0.8), "single parabolic well of depth 1.92"},
      {"harmonic_tilted", 1, "k*x^2 + x", {{"k", 8.0}}, I(-0.38, 0.38), "stiff tilted parabola"},
      {"flat", 1, "0", {}, I(-1, 1), "free Brownian motion"},
      {"linear_drift", 1, "c*x", {{"c", 0.5}}, I(-1, 1), "constant drift toward the left end"},
      {"cosine_ripple", 1, "c*cos(5*x)", {{"c", 0.15}}, I(-1, 1.2), "small periodic ripple"},
      {"mild_double_well", 1, "c*(x^2-1)^2", {{"c", 0.25}}, I(-1.5, 1.5), "low-barrier double well"},
      {"mild_tilted_double_well", 1, "c*(x^2-1)^2 + t*x", {{"c", 0.3}, {"t", 0.1}}, I(-1.4, 1.4),
       "low-barrier tilted double well"},
      {"double_well_2d", 2, "(x^2-1)^2 + 5*y^2", {}, B(0, 0, 2), "double well in a disc"},
      {"two_well_2d", 2, "(x^2-1)^2 + c*tanh(3*x) + 2*y^2", {{"c", 0.3}}, B(-0.05, 0, 1.2),
       "two basins draining to distinct boundary minima"},
      {"figure_eight_2d", 2, "(x^2+y^2-1)^2 + 0.3*x^2 + 0.1*x", {}, B(0, 0, 1.5),
       "ring with a separating saddle and a rim saddle"},
      {"tilted_paraboloid_2d", 2, "x^2 + 2*y^2 + x", {}, B(0, 0, 1), "tilted paraboloid in the unit disc"},
  };
}

double param(const PotentialSpec& spec, const char* name) { return spec.params.at(name); }

template <int D, class F>
FieldPtr native(const PotentialSpec& spec, F f) {
  return std::make_shared<detail::NativeField<F, D>>(spec, std::move(f));
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build_catalog();
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  raise(ErrorKind::ConfigError, "unknown catalog entry '" + name + "'");
}

PotentialSpec catalog_spec(const std::string& name, const std::map<std::string, double>& overrides) {
  const CatalogEntry& e = catalog_entry(name);
  std::map<std::string, double> params = e.params;
  for (const auto& [k, v] : overrides) {
    if (!params.count(k)) raise(ErrorKind::ConfigError, "catalog entry '" + name + "' has no parameter '" + k + "'");
    params[k] = v;
  }
  PotentialSpec spec = parse_potential(e.expression, params);
  spec.catalog = name;
  spec.dimension = e.dimension;
  return spec;
}

namespace detail {

FieldPtr make_native(const PotentialSpec& spec) {
  using ad::ipow;
  using std::cos;
  using std::tanh;
  const std::string& n = spec.catalog;
  auto sq = [](const auto& v) { return v * v; };
  if (n == "double_well" || n == "hip1")
    return native<1>(spec, [sq](const auto& x, const auto&) { return sq(x * x - 1.0); });
  if (n == "tilted_double_well" || n == "hip3") {
    double c = param(spec, "c");
    return native<1>(spec, [sq, c](const auto& x, const auto&) { return sq(x * x - 1.0) + c * x; });
  }
  if (n == "skewed_double_well") {
    double c = param(spec, "c");
    return native<1>(spec, [sq, c](const auto& x, const auto&) { return sq(x * x - 1.0) + c * (x * x * x - 4.0 * x); });
  }
  if (n == "hip2")
    return native<1>(spec, [](const auto& x, const auto&) {
      auto x2 = x * x;
      auto x3 = x2 * x;
      return -0.8 * (x3 * x2) + x2 * x2 + (23.0 / 12.0) * x3 - (27.0 / 16.0) * x2 - 1.125 * x;
    });
  if (n == "hip4") {
    double c = param(spec, "c");
    return native<1>(spec, [sq, c](const auto& x, const auto&) { return sq(x * x - 1.0) + c * (x * x * x) * (x * x - 2.0); });
  }
  if (n == "triple_well") {
    double c = param(spec, "c");
    return native<1>(spec, [c](const auto& x, const auto&) {
      auto x2 = x * x;
      auto x3 = x2 * x;
      auto x4 = x2 * x2;
      return (x4 * x2) / 6.0 - (x4 * x) / 10.0 - 11.0 * x4 / 16.0 + 3.0 * x3 / 8.0 + 9.0 * x2 / 16.0 - c * x;
    });
  }
  if (n == "shallow_well") {
    double k = param(spec, "k");
    return native<1>(spec, [k](const auto& x, const auto&) { return k * (x * x); });
  }
  if (n == "harmonic_tilted") {
    double k = param(spec, "k");
    return native<1>(spec, [k](const auto& x, const auto&) { return k * (x * x) + x; });
  }
  if (n == "flat") return native<1>(spec, [](const auto& x, const auto&) { return 0.0 * x; });
  if (n == "linear_drift") {
    double c = param(spec, "c");
    return native<1>(spec, [c](const auto& x, const auto&) { return c * x; });
  }
  if (n == "cosine_ripple") {
    double c = param(spec, "c");
    return native<1>(spec, [c](const auto& x, const auto&) {
      using std::cos;
      return c * cos(5.0 * x);
    });
  }
  if (n == "mild_double_well") {
    double c = param(spec, "c");
    return native<1>(spec, [sq, c](const auto& x, const auto&) { return c * sq(x * x - 1.0); });
  }
  if (n == "mild_tilted_double_well") {
    double c = param(spec, "c"), t = param(spec, "t");
    return native<1>(spec, [sq, c, t](const auto& x, const auto&) { return c * sq(x * x - 1.0) + t * x; });
  }
  if (n == "double_well_2d")
    return native<2>(spec, [sq](const auto& x, const auto& y) { return sq(x * x - 1.0) + 5.0 * (y * y); });
  if (n == "two_well_2d") {
    double c = param(spec, "c");
    return native<2>(spec, [sq, c](const auto& x, const auto& y) {
      using std::tanh;
      return sq(x * x - 1.0) + c * tanh(3.0 * x) + 2.0 * (y * y);
    });
  }
  if (n == "figure_eight_2d")
    return native<2>(spec, [sq](const auto& x, const auto& y) {
      return sq(x * x + y * y - 1.0) + 0.3 * (x * x) + 0.1 * x;
    });
  if (n == "tilted_paraboloid_2d")
    return native<2>(spec, [](const auto& x, const auto& y) { return x * x + 2.0 * (y * y) + x; });
  return nullptr;
}

}  // namespace detail

}  // namespace kramers
