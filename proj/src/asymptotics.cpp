#include "kramers/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kramers/errors.hpp"

namespace kramers {

namespace {

const JEntry& top_entry(const WellDecomposition& w) {
  for (const auto& e : w.jmap.entries)
    if (e.k == 1 && e.l == 1) return e;
  raise(ErrorKind::UnlabeledMinimum, "j-map has no x_{1,1}");
}

std::vector<ExitWeight> weights_over(const LandscapeAtlas& atlas, const std::vector<int>& contacts) {
  std::vector<ExitWeight> out;
  double total = 0.0;
  for (int b : contacts) {
    const auto& s = atlas.boundary_saddles[b];
    ExitWeight e;
    e.saddle = b;
    e.location = s.location;
    e.coordinate = s.coordinate;
    e.value = s.value;
    e.normal_derivative = s.normal_derivative;
    e.tangential_hess_det = s.tangential_hess_det;
    e.a = s.normal_derivative / std::sqrt(s.tangential_hess_det);
    total += e.a;
    out.push_back(e);
  }
  for (auto& e : out) e.a /= total;
  std::sort(out.begin(), out.end(), [](const ExitWeight& a, const ExitWeight& b) { return a.coordinate < b.coordinate; });
  return out;
}

// sum of det^{-1/2} over the minimizers of f within a component
double argmin_mass(const Topology& topo, int component, std::vector<int>* which = nullptr) {
  const auto& atlas = topo.atlas();
  const auto& comp = topo.component(component);
  double fmin = atlas.interior_criticals[comp.representative].value;
  double s = 0.0;
  for (int m : comp.contained_minima) {
    const auto& x = atlas.interior_criticals[m];
    if (!topo.same_value(x.value, fmin)) continue;
    s += 1.0 / std::sqrt(x.hessian_det);
    if (which) which->push_back(m);
  }
  return s;
}

std::string failed_list(const AssumptionReport& r, bool with_a3) {
  std::string s;
  auto add = [&](const char* n, const Verdict& v) {
    if (v.value && *v.value) return;
    if (!s.empty()) s += ", ";
    s += n;
    if (!v.value) s += " (not assessable)";
  };
  add("A1", r.a1);
  add("A2", r.a2);
  if (with_a3) add("A3", r.a3);
  return s;
}

bool is_true(const Verdict& v) { return v.value && *v.value; }

Point inward_seed(const Topology& topo, const Point& z) {
  double s = 1.5 * topo.filtration().cell_diagonal();
  Point n = topo.geom().outward_normal(z);
  return {z[0] - s * n[0], z[1] - s * n[1]};
}

bool branch_touches(const Topology& topo, const CriticalPoint& z, int q, int label) {
  double s = 1.5 * topo.filtration().cell_diagonal();
  Point v = topo.filtration().dim == 1 ? Point{1.0, 0.0} : z.neg_eigenvector;
  Point a{z.location[0] + s * v[0], z.location[1] + s * v[1]};
  Point b{z.location[0] - s * v[0], z.location[1] - s * v[1]};
  return topo.attach(a, q) == label || topo.attach(b, q) == label;
}

}  // namespace

const char* regime_name(LambdaRegime r) { return r == LambdaRegime::BoundaryOnly ? "boundary-only" : "mixed"; }

std::vector<ExitWeight> exit_weights(const WellDecomposition& w) {
  const auto& r = w.report;
  if (!is_true(r.a1) || !is_true(r.a2) || !is_true(r.a3))
    raise(ErrorKind::AssumptionsViolated, "exit weights need A1-A3; failed: " + failed_list(r, true));
  return weights_over(w.topology->atlas(), r.boundary_contacts);
}

PrincipalEigenvalue principal_eigenvalue(const WellDecomposition& w, double h) {
  if (!(h > 0.0)) raise(ErrorKind::InvalidArgument, "h must be positive");
  const auto& r = w.report;
  if (!is_true(r.a1)) raise(ErrorKind::HypothesesNotCertified, "principal eigenvalue needs A1");
  const Topology& topo = *w.topology;
  const auto& atlas = topo.atlas();
  const JEntry& x1 = top_entry(w);
  double den = argmin_mass(topo, x1.component);
  double num1 = 0.0, num2 = 0.0;
  std::vector<int> interior;
  for (int si : x1.j) {
    const auto& s = w.saddles[si];
    if (s.kind == SeparatingSaddle::Kind::Boundary) {
      const auto& b = atlas.boundary_saddles[s.ref];
      num1 += b.normal_derivative / std::sqrt(b.tangential_hess_det);
    } else {
      const auto& z = atlas.interior_criticals[s.ref];
      num2 += std::abs(*z.neg_eigenvalue) / std::sqrt(std::abs(z.hessian_det));
      interior.push_back(si);
    }
  }
  PrincipalEigenvalue p;
  p.depth = x1.depth;
  p.a1 = num1 / (std::sqrt(std::numbers::pi) * den);
  p.a2 = num2 / (2.0 * std::numbers::pi * den);
  // first-level wells sharing a gate with C_1
  bool disjoint = true;
  for (const auto& e : w.jmap.entries) {
    if (e.k != 1 || &e == &x1) continue;
    for (int si : e.j)
      if (std::find(x1.j.begin(), x1.j.end(), si) != x1.j.end()) disjoint = false;
  }
  double pre;
  if (is_true(r.a2) && is_true(r.a4)) {
    p.regime = LambdaRegime::BoundaryOnly;
    p.a2 = 0.0;
    pre = p.a1 / std::sqrt(h);
  } else if (disjoint) {
    p.regime = LambdaRegime::Mixed;
    pre = p.a1 / std::sqrt(h) + p.a2;
  } else if (is_true(r.a2)) {
    p.regime = LambdaRegime::BoundaryOnly;
    pre = p.a1 / std::sqrt(h);
  } else {
    raise(ErrorKind::HypothesesNotCertified,
          "C_1 does not reach the boundary and shares a saddle with another first-level well");
  }
  p.log_lambda = std::log(pre) - 2.0 * p.depth / h;
  p.lambda = std::exp(p.log_lambda);
  return p;
}

std::vector<EigenvalueRate> eigenvalue_rates(const WellDecomposition& w) {
  std::vector<EigenvalueRate> out;
  for (const auto& e : w.jmap.entries) {
    EigenvalueRate r;
    r.minimum = e.minimum;
    r.k = e.k;
    r.l = e.l;
    r.S = e.depth;
    for (int si : e.j)
      if (w.saddles[si].kind == SeparatingSaddle::Kind::Boundary) r.meets_boundary = true;
    r.q = r.meets_boundary ? -0.75 : -0.5;
    out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(), [](const EigenvalueRate& a, const EigenvalueRate& b) { return a.S > b.S; });
  return out;
}

QsdWeights qsd_weights(const WellDecomposition& w) {
  const auto& r = w.report;
  if (!r.cmax) raise(ErrorKind::MinimumNotInCmax, "C_max is undefined without A1");
  if (!r.cmax_min_is_global)
    raise(ErrorKind::MinimumNotInCmax, "the minimum of f over the closure of C_max is not the global minimum");
  QsdWeights q;
  double total = argmin_mass(*w.topology, *r.cmax, &q.minima);
  std::sort(q.minima.begin(), q.minima.end());
  for (int m : q.minima) q.weights.push_back(1.0 / std::sqrt(w.topology->atlas().interior_criticals[m].hessian_det) / total);
  return q;
}

std::vector<ExitWeight> exit_weights_for_well(const WellDecomposition& w, int component) {
  const Topology& topo = *w.topology;
  const auto& atlas = topo.atlas();
  if (component < 0 || component >= static_cast<int>(topo.components().size()))
    raise(ErrorKind::InvalidArgument, "no component with id " + std::to_string(component));
  const auto& C = topo.component(component);
  int label = component - topo.component_id(C.query, 0);
  for (const auto& z : atlas.interior_criticals) {
    if (z.index != 1 || !topo.same_value(z.value, C.level)) continue;
    if (branch_touches(topo, z, C.query, label))
      raise(ErrorKind::WellHypothesisViolated, "critical point of f on the boundary of the well");
  }
  std::vector<int> contacts;
  for (std::size_t b = 0; b < atlas.boundary_saddles.size(); ++b) {
    const auto& s = atlas.boundary_saddles[b];
    if (!topo.same_value(s.value, C.level)) continue;
    if (topo.attach(inward_seed(topo, s.location), C.query) == label) contacts.push_back(static_cast<int>(b));
  }
  if (contacts.empty()) raise(ErrorKind::WellHypothesisViolated, "the well does not reach the boundary");
  return weights_over(atlas, contacts);
}

ExitPrediction predict(const WellDecomposition& w, double h) {
  ExitPrediction p;
  p.h = h;
  p.weights = exit_weights(w);
  p.eigenvalue = principal_eigenvalue(w, h);
  p.log_mean_exit_time = -p.eigenvalue.log_lambda;
  p.mean_exit_time = std::exp(p.log_mean_exit_time);
  p.remainder_order = is_true(w.report.a4) ? "h" : "h^{1/4}";
  p.rates = eigenvalue_rates(w);
  return p;
}

}  // namespace kramers
