#pragma once

#include <vector>

#include "kramers/geometry.hpp"
#include "kramers/potential.hpp"

namespace kramers {

struct SpectralOptions {
  int grid = 2048;  // number of cells
  int k = 2;
  bool check_resolution = true;
};

struct DirichletSpectrum {
  int n = 0;
  double h = 0.0;
  double a = 0.0, b = 0.0, dx = 0.0;
  std::vector<double> x;            // n + 1 nodes
  std::vector<double> f;            // potential at the nodes
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> u;            // principal eigenfunction, zero at both ends
  std::vector<double> log_u;        // -inf at the ends
  std::vector<double> log_cond;     // per cell, log of (h/2) / int e^{2f/h}
  std::vector<double> log_mass;     // per node, log of int e^{-2f/h} over the dual cell
  double lambda_doubled = 0.0;      // principal eigenvalue on the refined grid, 0 if unchecked
  int local_minima = 0;

  double gap_ratio() const { return eigenvalues.size() > 1 ? eigenvalues[0] / eigenvalues[1] : 0.0; }
};

struct QsdDensity {
  std::vector<double> x;
  std::vector<double> density;
  double dx = 0.0;
  double mass() const;
  // trapezoid mass over [lo, hi], linear interpolation at the ends
  double mass_between(double lo, double hi) const;
};

struct SpectralExit {
  double p_left = 0.0, p_right = 0.0;
  double raw_left = 0.0, raw_right = 0.0;
};

DirichletSpectrum assemble_and_solve(const PotentialField& field, const DomainGeometry& geom, double h,
                                     const SpectralOptions& opts = {});
SpectralExit exit_probabilities_spectral(const DirichletSpectrum& s);
QsdDensity qsd_density(const DirichletSpectrum& s);

}  // namespace kramers
