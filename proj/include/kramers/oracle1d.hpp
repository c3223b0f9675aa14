#pragma once

#include <vector>

#include "kramers/asymptotics.hpp"
#include "kramers/potential.hpp"
#include "kramers/spectral1d.hpp"

namespace kramers {

struct ExitProbabilities {
  double p_left = 0.0, p_right = 0.0;
  double err_estimate = 0.0;  // relative
  double log_shift = 0.0;     // 2 max f / h
};

// P_x[X_tau = z1] and P_x[X_tau = z2] on (z1, z2)
ExitProbabilities exit_prob_exact(const PotentialField& field, double z1, double z2, double h, double x);

// left exit probability at every node of a sorted grid spanning [z1, z2]
std::vector<double> exit_prob_profile(const PotentialField& field, double z1, double z2, double h,
                                      const std::vector<double>& nodes, double* err_estimate = nullptr);

struct CrossingAsymptotic {
  double p_far = 0.0;     // leading sqrt(h) term
  double constant = 0.0;  // sqrt|f''(z)| / (2 |f'(z1)| sqrt(pi))
  double saddle = 0.0, near_end = 0.0, far_end = 0.0;
  double f2_saddle = 0.0, fp_near = 0.0;
};

CrossingAsymptotic laplace_crossing_asymptotic(const WellDecomposition& w, double h);

ExitProbabilities qsd_exit_prob_exact(const PotentialField& field, const DirichletSpectrum& spectrum);

}  // namespace kramers
