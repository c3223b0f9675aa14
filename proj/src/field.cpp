#include <cmath>

#include "field_impl.hpp"
#include "kramers/errors.hpp"

namespace kramers {

FieldPtr make_field(const PotentialSpec& spec) {
  if (!spec.catalog.empty()) {
    if (auto f = detail::make_native(spec)) return f;
  }
  if (!spec.expression) raise(ErrorKind::ConfigError, "potential has no expression");
  if (spec.dimension == 1) {
    if (spec.expression->uses_y()) raise(ErrorKind::ConfigError, "1D potential references y");
    return std::make_shared<detail::ExpressionField<1>>(spec);
  }
  if (spec.dimension == 2) return std::make_shared<detail::ExpressionField<2>>(spec);
  raise(ErrorKind::ConfigError, "dimension must be 1 or 2");
}

FieldPtr make_shifted(const PotentialSpec& spec, double c) {
  PotentialSpec s = spec;
  s.offset += c;
  return make_field(s);
}

Evaluation evaluate(const PotentialField& field, const DomainGeometry& geom, const Point& x) {
  if (field.dim() != geom.dim()) raise(ErrorKind::InvalidArgument, "potential and domain dimensions differ");
  if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || geom.boundary_distance(x) > 1e-10)
    raise(ErrorKind::OutOfDomain, "point outside the closed domain " + geom.describe());
  return field.eval(x);
}

double boundary_normal_derivative(const PotentialField& field, const DomainGeometry& geom, const Point& z) {
  Point n = geom.outward_normal(z);
  Point g;
  field.gradient(z, g);
  return geom.dim() == 1 ? g[0] * n[0] : g[0] * n[0] + g[1] * n[1];
}

}  // namespace kramers
