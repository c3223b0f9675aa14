#pragma once

#include <array>
#include <string>

namespace kramers {

// Points are stored in two slots; 1D problems only use p[0].
using Point = std::array<double, 2>;

class DomainGeometry {
 public:
  enum class Shape { Interval, Ball2D };

  static DomainGeometry interval(double a, double b);
  static DomainGeometry ball(Point center, double radius);

  Shape shape() const { return shape_; }
  int dim() const { return shape_ == Shape::Interval ? 1 : 2; }
  double a() const { return a_; }
  double b() const { return b_; }
  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  double diameter() const;

  bool contains(const Point& p) const;
  // signed distance to the boundary, negative inside
  double boundary_distance(const Point& p) const;
  bool on_boundary(const Point& p, double tol = 1e-10) const;
  Point outward_normal(const Point& z) const;
  // -1/+1 for the interval endpoints, polar angle in (-pi, pi] for the ball
  double boundary_coordinate(const Point& z) const;
  Point boundary_point(double coordinate) const;
  // nearest point of the boundary
  Point project_to_boundary(const Point& p) const;
  // axis-aligned bounding box: {xmin, xmax, ymin, ymax}
  std::array<double, 4> bounding_box() const;
  std::string describe() const;

 private:
  Shape shape_ = Shape::Interval;
  double a_ = 0.0, b_ = 1.0;
  Point center_{0.0, 0.0};
  double radius_ = 1.0;
};

}  // namespace kramers
