#pragma once

#include <string>
#include <vector>

#include "kramers/topology.hpp"

namespace kramers {

struct ExitWeight {
  int saddle = -1;  // index into atlas.boundary_saddles
  Point location{0.0, 0.0};
  double coordinate = 0.0;
  double a = 0.0;
  double value = 0.0;
  double normal_derivative = 0.0;
  double tangential_hess_det = 1.0;
};

struct EigenvalueRate {
  int minimum = -1;
  int k = 0, l = 0;
  double S = 0.0;
  double q = -0.5;  // -3/4 when j(x) meets the boundary
  bool meets_boundary = false;
};

enum class LambdaRegime { BoundaryOnly, Mixed };
const char* regime_name(LambdaRegime r);

struct PrincipalEigenvalue {
  double lambda = 0.0;
  double log_lambda = 0.0;  // stays finite when lambda underflows
  LambdaRegime regime = LambdaRegime::BoundaryOnly;
  double a1 = 0.0, a2 = 0.0;
  double depth = 0.0;
};

struct ExitPrediction {
  double h = 0.0;
  std::vector<ExitWeight> weights;
  PrincipalEigenvalue eigenvalue;
  double mean_exit_time = 0.0;
  double log_mean_exit_time = 0.0;
  std::string remainder_order;  // "h" under A4, else "h^{1/4}"
  std::vector<EigenvalueRate> rates;
};

struct QsdWeights {
  std::vector<int> minima;
  std::vector<double> weights;
};

std::vector<ExitWeight> exit_weights(const WellDecomposition& w);
PrincipalEigenvalue principal_eigenvalue(const WellDecomposition& w, double h);
std::vector<EigenvalueRate> eigenvalue_rates(const WellDecomposition& w);
QsdWeights qsd_weights(const WellDecomposition& w);
// component: id of a first-level well
std::vector<ExitWeight> exit_weights_for_well(const WellDecomposition& w, int component);
ExitPrediction predict(const WellDecomposition& w, double h);

}  // namespace kramers
