#include "kramers/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kramers/errors.hpp"

namespace kramers {

DomainGeometry DomainGeometry::interval(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    raise(ErrorKind::ConfigError, "interval requires finite a < b");
  DomainGeometry g;
  g.shape_ = Shape::Interval;
  g.a_ = a;
  g.b_ = b;
  return g;
}

DomainGeometry DomainGeometry::ball(Point center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(center[0]) || !std::isfinite(center[1]))
    raise(ErrorKind::ConfigError, "ball requires a finite center and radius > 0");
  DomainGeometry g;
  g.shape_ = Shape::Ball2D;
  g.center_ = center;
  g.radius_ = radius;
  return g;
}

double DomainGeometry::diameter() const { return shape_ == Shape::Interval ? b_ - a_ : 2.0 * radius_; }

double DomainGeometry::boundary_distance(const Point& p) const {
  if (shape_ == Shape::Interval) return std::max(a_ - p[0], p[0] - b_);
  return std::hypot(p[0] - center_[0], p[1] - center_[1]) - radius_;
}

bool DomainGeometry::contains(const Point& p) const { return boundary_distance(p) < 0.0; }

bool DomainGeometry::on_boundary(const Point& p, double tol) const {
  return std::abs(boundary_distance(p)) <= tol;
}

Point DomainGeometry::outward_normal(const Point& z) const {
  if (!on_boundary(z)) raise(ErrorKind::NotOnBoundary, "point is not on the boundary");
  if (shape_ == Shape::Interval) return {z[0] - a_ < b_ - z[0] ? -1.0 : 1.0, 0.0};
  double dx = z[0] - center_[0], dy = z[1] - center_[1];
  double r = std::hypot(dx, dy);
  return {dx / r, dy / r};
}

double DomainGeometry::boundary_coordinate(const Point& z) const {
  if (shape_ == Shape::Interval) return z[0] - a_ < b_ - z[0] ? -1.0 : 1.0;
  return std::atan2(z[1] - center_[1], z[0] - center_[0]);
}

Point DomainGeometry::boundary_point(double coordinate) const {
  if (shape_ == Shape::Interval) return {coordinate < 0.0 ? a_ : b_, 0.0};
  return {center_[0] + radius_ * std::cos(coordinate), center_[1] + radius_ * std::sin(coordinate)};
}

Point DomainGeometry::project_to_boundary(const Point& p) const {
  if (shape_ == Shape::Interval) return {p[0] - a_ < b_ - p[0] ? a_ : b_, 0.0};
  double dx = p[0] - center_[0], dy = p[1] - center_[1];
  double r = std::hypot(dx, dy);
  if (r == 0.0) return {center_[0] + radius_, center_[1]};
  return {center_[0] + radius_ * dx / r, center_[1] + radius_ * dy / r};
}

std::array<double, 4> DomainGeometry::bounding_box() const {
  if (shape_ == Shape::Interval) return {a_, b_, 0.0, 0.0};
  return {center_[0] - radius_, center_[0] + radius_, center_[1] - radius_, center_[1] + radius_};
}

std::string DomainGeometry::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (shape_ == Shape::Interval)
    os << "interval(" << a_ << ", " << b_ << ")";
  else
    os << "ball(center=(" << center_[0] << ", " << center_[1] << "), radius=" << radius_ << ")";
  return os.str();
}

}  // namespace kramers
