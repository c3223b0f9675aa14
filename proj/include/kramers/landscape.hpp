#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kramers/geometry.hpp"
#include "kramers/potential.hpp"

namespace kramers {

struct CriticalPoint {
  Point location{0.0, 0.0};
  double value = 0.0;
  int index = 0;
  double hessian_det = 0.0;
  std::optional<double> neg_eigenvalue;
  std::array<double, 2> eigenvalues{0.0, 0.0};  // ascending; second unused in 1D
  Point neg_eigenvector{0.0, 0.0};              // unit eigenvector of the smallest eigenvalue
};

// Critical point of the boundary trace f restricted to the boundary.
struct BoundaryCritical {
  Point location{0.0, 0.0};
  double coordinate = 0.0;
  double value = 0.0;
  double normal_derivative = 0.0;
  double tangential_second = 1.0;  // second derivative of the trace in arclength; 1 in 1D
  bool is_minimum = true;
};

struct BoundarySaddle {
  Point location{0.0, 0.0};
  double coordinate = 0.0;
  double value = 0.0;
  double normal_derivative = 0.0;
  double tangential_hess_det = 1.0;
};

struct A0Clause {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct A0Report {
  bool passed = false;
  std::vector<A0Clause> clauses;
};

struct LandscapeOptions {
  int seeds_per_axis = 16;
  int boundary_samples = 4096;
  double tol_grad = 1e-9;
  double tol_degenerate = 1e-8;
};

struct LandscapeAtlas {
  int dim = 1;
  std::vector<CriticalPoint> interior_criticals;
  std::vector<BoundarySaddle> boundary_saddles;
  std::vector<BoundaryCritical> boundary_trace;  // all trace critical points, minima and maxima
  A0Report a0_report;
  double boundary_min = 0.0;
  double boundary_max = 0.0;

  std::vector<int> minima() const;  // indices of index-0 interior criticals
};

std::vector<CriticalPoint> find_critical_points(const PotentialField& field, const DomainGeometry& geom,
                                                int seeds_per_axis, const LandscapeOptions& opts = {});

std::vector<BoundaryCritical> boundary_trace_criticals(const PotentialField& field, const DomainGeometry& geom,
                                                       int boundary_samples, const LandscapeOptions& opts = {});

std::vector<BoundarySaddle> find_boundary_saddles(const PotentialField& field, const DomainGeometry& geom,
                                                  int boundary_samples, const LandscapeOptions& opts = {});

// Runs every search and records (A0) failures in the report instead of throwing.
LandscapeAtlas build_atlas(const PotentialField& field, const DomainGeometry& geom, const LandscapeOptions& opts = {});

using RegionIndicator = std::function<bool(const Point&)>;

bool in_attraction_basin(const PotentialField& field, const DomainGeometry& geom, const Point& x,
                         const RegionIndicator& target, double t_max = 1e4, double tol_grad = 1e-9);

}  // namespace kramers
