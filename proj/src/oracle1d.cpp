#include "kramers/oracle1d.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kramers/errors.hpp"

namespace kramers {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double slope(const PotentialField& f, double t) {
  Point g;
  f.gradient({t, 0.0}, g);
  return g[0];
}

struct Workspace {
  gsl_integration_workspace* ws;
  Workspace() : ws(gsl_integration_workspace_alloc(1000)) {
    static const bool off = [] {
      gsl_set_error_handler_off();
      return true;
    }();
    (void)off;
  }
  ~Workspace() { gsl_integration_workspace_free(ws); }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
};

class LogIntegrator {
 public:
  LogIntegrator(const PotentialField& field, double z1, double z2, double h) : field_(field), h_(h) {
    const int samples = 4096;
    breaks_.push_back(z1);
    double prev = slope(field, z1);
    double tp = z1;
    for (int i = 1; i <= samples; ++i) {
      double t = z1 + (z2 - z1) * i / samples;
      double s = slope(field, t);
      if ((prev < 0.0 && s > 0.0) || (prev > 0.0 && s < 0.0)) {
        double lo = tp, hi = t, slo = prev;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
          double mid = 0.5 * (lo + hi);
          double sm = slope(field, mid);
          if ((sm < 0.0) == (slo < 0.0)) {
            lo = mid;
            slo = sm;
          } else {
            hi = mid;
          }
        }
        breaks_.push_back(0.5 * (lo + hi));
      }
      if (s != 0.0) {
        prev = s;
        tp = t;
      }
    }
    breaks_.push_back(z2);
    fmax_ = kNegInf;
    for (double b : breaks_) fmax_ = std::max(fmax_, field.value({b, 0.0}));
  }

  double log_shift() const { return 2.0 * fmax_ / h_; }

  // log int_lo^hi e^{2f/h}; err_rel keeps the largest relative error estimate
  double log_integral(double lo, double hi, double* err_rel = nullptr) {
    if (!(hi > lo)) return kNegInf;
    std::vector<double> pts{lo};
    for (double b : breaks_)
      if (b > lo && b < hi) pts.push_back(b);
    pts.push_back(hi);
    double acc = kNegInf, err_acc = kNegInf;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      double p = pts[k], q = pts[k + 1];
      double M = std::max(field_.value({p, 0.0}), field_.value({q, 0.0}));
      struct Ctx {
        const PotentialField* f;
        double M, h;
      } ctx{&field_, M, h_};
      gsl_function F;
      F.function = [](double t, void* c) {
        auto* x = static_cast<Ctx*>(c);
        return std::exp(2.0 * (x->f->value({t, 0.0}) - x->M) / x->h);
      };
      F.params = &ctx;
      double r = 0.0, e = 0.0;
      int status = gsl_integration_qag(&F, p, q, 0.0, 1e-10, 1000, GSL_INTEG_GAUSS15, ws_.ws, &r, &e);
      if (status != GSL_SUCCESS)
        raise(ErrorKind::QuadratureNonConvergence,
              std::string("adaptive quadrature failed: ") + gsl_strerror(status));
      if (!(r > 0.0)) raise(ErrorKind::QuadratureNonConvergence, "quadrature returned a non-positive integral");
      double scale = 2.0 * M / h_;
      acc = lse(acc, scale + std::log(r));
      if (e > 0.0) err_acc = lse(err_acc, scale + std::log(e));
    }
    if (err_rel) *err_rel = std::max(*err_rel, err_acc == kNegInf ? 0.0 : std::exp(err_acc - acc));
    return acc;
  }

 private:
  const PotentialField& field_;
  double h_;
  double fmax_ = 0.0;
  std::vector<double> breaks_;
  Workspace ws_;
};

}  // namespace

ExitProbabilities exit_prob_exact(const PotentialField& field, double z1, double z2, double h, double x) {
  if (!(h > 0.0)) raise(ErrorKind::InvalidArgument, "h must be positive");
  if (!(z2 > z1)) raise(ErrorKind::InvalidArgument, "empty interval");
  if (x < z1 || x > z2) raise(ErrorKind::OutOfDomain, "start point outside the interval");
  LogIntegrator I(field, z1, z2, h);
  ExitProbabilities out;
  out.log_shift = I.log_shift();
  double la = I.log_integral(z1, x, &out.err_estimate);
  double lb = I.log_integral(x, z2, &out.err_estimate);
  double lt = lse(la, lb);
  out.p_left = std::exp(lb - lt);
  out.p_right = std::exp(la - lt);
  return out;
}

namespace {

struct Profile {
  std::vector<double> left, right;
  double err = 0.0, log_shift = 0.0;
};

Profile profile(const PotentialField& field, double z1, double z2, double h, const std::vector<double>& nodes) {
  if (!(h > 0.0)) raise(ErrorKind::InvalidArgument, "h must be positive");
  if (nodes.size() < 2) raise(ErrorKind::InvalidArgument, "profile needs at least two nodes");
  LogIntegrator I(field, z1, z2, h);
  Profile P;
  P.log_shift = I.log_shift();
  const std::size_t n = nodes.size();
  std::vector<double> cell(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) cell[i] = I.log_integral(nodes[i], nodes[i + 1], &P.err);
  std::vector<double> suffix(n, kNegInf), prefix(n, kNegInf);
  for (std::size_t i = n - 1; i-- > 0;) suffix[i] = lse(suffix[i + 1], cell[i]);
  for (std::size_t i = 1; i < n; ++i) prefix[i] = lse(prefix[i - 1], cell[i - 1]);
  double total = suffix[0];
  P.left.resize(n);
  P.right.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    P.left[i] = std::exp(suffix[i] - total);
    P.right[i] = std::exp(prefix[i] - total);
  }
  return P;
}

}  // namespace

std::vector<double> exit_prob_profile(const PotentialField& field, double z1, double z2, double h,
                                      const std::vector<double>& nodes, double* err_estimate) {
  Profile P = profile(field, z1, z2, h, nodes);
  if (err_estimate) *err_estimate = P.err;
  return P.left;
}

CrossingAsymptotic laplace_crossing_asymptotic(const WellDecomposition& w, double h) {
  const Topology& topo = *w.topology;
  const auto& atlas = topo.atlas();
  const auto& r = w.report;
  auto ok = [](const Verdict& v) { return v.value && *v.value; };
  if (atlas.dim != 1) raise(ErrorKind::ShapeMismatch, "crossing law is one-dimensional");
  if (!ok(r.a1) || !ok(r.a2) || !ok(r.a3) || !r.a4.value || *r.a4.value)
    raise(ErrorKind::ShapeMismatch, "needs A1-A3 true and A4 false");
  const JEntry* x1 = nullptr;
  for (const auto& e : w.jmap.entries)
    if (e.k == 1 && e.l == 1) x1 = &e;
  if (!x1) raise(ErrorKind::ShapeMismatch, "no first-level well");
  std::vector<int> interior;
  for (int si : x1->j)
    if (w.saddles[si].kind == SeparatingSaddle::Kind::Interior) interior.push_back(si);
  if (interior.size() != 1) raise(ErrorKind::ShapeMismatch, "needs a single interior separating saddle on the rim");
  if (r.boundary_contacts.size() != 1) raise(ErrorKind::ShapeMismatch, "needs a single boundary contact");
  const auto& z = atlas.interior_criticals[w.saddles[interior[0]].ref];
  const auto& b = atlas.boundary_saddles[r.boundary_contacts[0]];
  if (!topo.same_value(z.value, b.value)) raise(ErrorKind::ShapeMismatch, "saddle is not at the boundary level");
  const auto& g = topo.geom();
  CrossingAsymptotic c;
  c.saddle = z.location[0];
  c.near_end = b.location[0];
  c.far_end = std::abs(c.near_end - g.a()) < std::abs(c.near_end - g.b()) ? g.b() : g.a();
  c.f2_saddle = z.hessian_det;
  c.fp_near = b.normal_derivative;
  c.constant = std::sqrt(std::abs(c.f2_saddle)) / (2.0 * std::abs(c.fp_near) * std::sqrt(std::numbers::pi));
  c.p_far = c.constant * std::sqrt(h);
  return c;
}

ExitProbabilities qsd_exit_prob_exact(const PotentialField& field, const DirichletSpectrum& spectrum) {
  QsdDensity nu = qsd_density(spectrum);
  Profile P = profile(field, spectrum.a, spectrum.b, spectrum.h, spectrum.x);
  ExitProbabilities out;
  out.err_estimate = P.err;
  out.log_shift = P.log_shift;
  for (std::size_t i = 0; i + 1 < spectrum.x.size(); ++i) {
    out.p_left += 0.5 * (nu.density[i] * P.left[i] + nu.density[i + 1] * P.left[i + 1]) * nu.dx;
    out.p_right += 0.5 * (nu.density[i] * P.right[i] + nu.density[i + 1] * P.right[i + 1]) * nu.dx;
  }
  return out;
}

}  // namespace kramers
