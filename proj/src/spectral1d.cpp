#include "kramers/spectral1d.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>

#include "kramers/errors.hpp"

extern "C" void dlasdq_(const char* uplo, const int* sqre, const int* n, const int* ncvt, const int* nru, const int* ncc,
                        double* d, double* e, double* vt, const int* ldvt, double* u, const int* ldu, double* c,
                        const int* ldc, double* work, int* info, std::size_t uplo_len);

namespace kramers {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

struct Assembly {
  std::vector<double> x, f, log_cond, log_mass;
};

// log of int_lo^hi e^{s*2f/h} by 8-point Gauss-Legendre
double log_gl(const PotentialField& field, double lo, double hi, double s, double h) {
  using GL = boost::math::quadrature::gauss<double, 8>;
  const auto& xs = GL::abscissa();
  const auto& ws = GL::weights();
  double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
  double acc = kNegInf;
  for (std::size_t j = 0; j < xs.size(); ++j)
    for (int sign : {-1, 1}) {
      if (xs[j] == 0.0 && sign < 0) continue;
      double t = c + sign * r * xs[j];
      acc = lse(acc, std::log(ws[j]) + s * 2.0 * field.value({t, 0.0}) / h);
    }
  return acc + std::log(r);
}

Assembly assemble(const PotentialField& field, double a, double b, double h, int n) {
  Assembly A;
  double dx = (b - a) / n;
  A.x.resize(n + 1);
  A.f.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    A.x[i] = a + i * dx;
    A.f[i] = field.value({A.x[i], 0.0});
    if (!std::isfinite(A.f[i])) raise(ErrorKind::ScalingFailure, "non-finite potential on the spectral grid");
  }
  A.log_cond.resize(n);
  A.log_mass.assign(n + 1, kNegInf);
  std::vector<double> left(n), right(n);
  for (int e = 0; e < n; ++e) {
    double mid = A.x[e] + 0.5 * dx;
    double rl = log_gl(field, A.x[e], mid, 1.0, h), rr = log_gl(field, mid, A.x[e + 1], 1.0, h);
    A.log_cond[e] = std::log(0.5 * h) - lse(rl, rr);
    left[e] = log_gl(field, A.x[e], mid, -1.0, h);
    right[e] = log_gl(field, mid, A.x[e + 1], -1.0, h);
  }
  for (int i = 1; i < n; ++i) A.log_mass[i] = lse(right[i - 1], left[i]);
  for (double v : A.log_cond)
    if (!std::isfinite(v)) raise(ErrorKind::ScalingFailure, "conductance out of range");
  return A;
}

// eigenvalues of the Dirichlet pencil as squared singular values of its bidiagonal factor
std::vector<double> small_eigenvalues(const Assembly& A, int k) {
  const int n = static_cast<int>(A.log_cond.size());
  const int m = n - 1;
  std::vector<double> d(m), e(m);
  for (int r = 0; r < m; ++r) {
    d[r] = std::exp(0.5 * (A.log_cond[r] - A.log_mass[r + 1]));
    e[r] = std::exp(0.5 * (A.log_cond[r + 1] - A.log_mass[r + 1]));
    if (!std::isfinite(d[r]) || !std::isfinite(e[r]) || d[r] == 0.0 || e[r] == 0.0)
      raise(ErrorKind::ScalingFailure, "bidiagonal factor out of range; refine the grid");
  }
  int sqre = 1, zero = 0, one = 1, info = 0;
  std::vector<double> work(4 * m);
  double dummy = 0.0;
  dlasdq_("U", &sqre, &m, &zero, &zero, &zero, d.data(), e.data(), &dummy, &one, &dummy, &one, &dummy, &one,
          work.data(), &info, 1);
  if (info != 0) raise(ErrorKind::ScalingFailure, "singular value iteration failed (info " + std::to_string(info) + ")");
  std::sort(d.begin(), d.end());
  std::vector<double> out;
  for (int j = 0; j < k && j < m; ++j) out.push_back(d[j] * d[j]);
  return out;
}

// inverse iteration with the exact discrete Green's function, kept in log form so that
// exponentially small entries survive
std::vector<double> principal_log_vector(const Assembly& A) {
  const int n = static_cast<int>(A.log_cond.size());
  std::vector<double> logR(n);
  for (int e = 0; e < n; ++e) logR[e] = -A.log_cond[e];
  std::vector<double> P(n + 1, kNegInf), Q(n + 1, kNegInf);
  for (int i = 1; i <= n; ++i) P[i] = lse(P[i - 1], logR[i - 1]);
  for (int i = n - 1; i >= 0; --i) Q[i] = lse(Q[i + 1], logR[i]);
  std::vector<double> lu(n + 1, 0.0), next(n + 1), S1(n + 1), S2(n + 1);
  lu[0] = lu[n] = kNegInf;
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int it = 0; it < 20000 && stalled < 50; ++it) {
    S1[0] = kNegInf;
    for (int i = 1; i < n; ++i) S1[i] = lse(S1[i - 1], P[i] + A.log_mass[i] + lu[i]);
    S2[n - 1] = kNegInf;
    for (int i = n - 2; i >= 0; --i) S2[i] = lse(S2[i + 1], Q[i + 1] + A.log_mass[i + 1] + lu[i + 1]);
    double mx = kNegInf;
    for (int k = 1; k < n; ++k) {
      next[k] = lse(Q[k] + S1[k], P[k] + S2[k]) - P[n];
      mx = std::max(mx, next[k]);
    }
    double change = 0.0;
    for (int k = 1; k < n; ++k) {
      next[k] -= mx;
      change = std::max(change, std::abs(next[k] - lu[k]));
    }
    next[0] = next[n] = kNegInf;
    lu.swap(next);
    if (change < 1e-12) break;
    if (change < best) {
      best = change;
      stalled = 0;
    } else {
      ++stalled;
    }
  }
  return lu;
}

}  // namespace

DirichletSpectrum assemble_and_solve(const PotentialField& field, const DomainGeometry& geom, double h,
                                     const SpectralOptions& opts) {
  if (geom.shape() != DomainGeometry::Shape::Interval) raise(ErrorKind::InvalidArgument, "spectral solver is 1D only");
  if (!(h > 0.0)) raise(ErrorKind::InvalidArgument, "h must be positive");
  if (opts.grid < 512) raise(ErrorKind::InvalidArgument, "grid must have at least 512 cells");
  if (opts.k < 1) raise(ErrorKind::InvalidArgument, "k must be at least 1");
  DirichletSpectrum s;
  s.n = opts.grid;
  s.h = h;
  s.a = geom.a();
  s.b = geom.b();
  s.dx = (s.b - s.a) / s.n;
  Assembly A = assemble(field, s.a, s.b, h, s.n);
  for (int i = 1; i < s.n; ++i)
    if (A.f[i] < A.f[i - 1] && A.f[i] < A.f[i + 1]) ++s.local_minima;
  if (opts.k > s.local_minima + 2)
    raise(ErrorKind::InvalidArgument, "k exceeds the number of local minima plus two (" +
                                          std::to_string(s.local_minima + 2) + ")");
  s.eigenvalues = small_eigenvalues(A, opts.k);
  if (s.eigenvalues.size() > 1 && !(s.eigenvalues[0] < s.eigenvalues[1]))
    raise(ErrorKind::UnderResolved, "principal eigenvalue is not simple on this grid");
  if (opts.check_resolution) {
    Assembly A2 = assemble(field, s.a, s.b, h, 2 * s.n);
    s.lambda_doubled = small_eigenvalues(A2, 1)[0];
    if (std::abs(s.lambda_doubled - s.eigenvalues[0]) > 0.05 * s.eigenvalues[0])
      raise(ErrorKind::UnderResolved, "principal eigenvalue moves by more than 5% under grid doubling");
  }
  std::vector<double> lu = principal_log_vector(A);
  // normalization: trapezoid int u^2 e^{-2f/h} = 1
  double lz = kNegInf;
  for (int i = 1; i < s.n; ++i) lz = lse(lz, 2.0 * lu[i] - 2.0 * A.f[i] / h);
  lz += std::log(s.dx);
  s.log_u.resize(s.n + 1);
  s.u.assign(s.n + 1, 0.0);
  s.log_u[0] = s.log_u[s.n] = kNegInf;
  for (int i = 1; i < s.n; ++i) {
    s.log_u[i] = lu[i] - 0.5 * lz;
    s.u[i] = std::exp(s.log_u[i]);
    if (!std::isfinite(s.u[i])) raise(ErrorKind::ScalingFailure, "normalized eigenfunction overflows");
  }
  s.x = std::move(A.x);
  s.f = std::move(A.f);
  s.log_cond = std::move(A.log_cond);
  s.log_mass = std::move(A.log_mass);
  return s;
}

SpectralExit exit_probabilities_spectral(const DirichletSpectrum& s) {
  // discrete boundary fluxes c_0 u_1 and c_{n-1} u_{n-1} against lambda * sum m_i u_i
  double lm = kNegInf;
  for (int i = 1; i < s.n; ++i) lm = lse(lm, s.log_mass[i] + s.log_u[i]);
  double ll = s.log_cond[0] + s.log_u[1];
  double lr = s.log_cond[s.n - 1] + s.log_u[s.n - 1];
  SpectralExit out;
  double lam = std::log(s.eigenvalues.at(0));
  out.raw_left = std::exp(ll - lam - lm);
  out.raw_right = std::exp(lr - lam - lm);
  if (!(out.raw_left >= 0.0) || !(out.raw_right >= 0.0))
    raise(ErrorKind::NegativeDensity, "negative boundary flux; refine the grid");
  double lt = lse(ll, lr);
  out.p_left = std::exp(ll - lt);
  out.p_right = std::exp(lr - lt);
  return out;
}

QsdDensity qsd_density(const DirichletSpectrum& s) {
  QsdDensity q;
  q.x = s.x;
  q.dx = s.dx;
  std::vector<double> lg(s.n + 1, kNegInf);
  double lz = kNegInf;
  for (int i = 1; i < s.n; ++i) {
    lg[i] = s.log_u[i] - 2.0 * s.f[i] / s.h;
    lz = lse(lz, lg[i]);
  }
  lz += std::log(s.dx);
  q.density.assign(s.n + 1, 0.0);
  for (int i = 1; i < s.n; ++i) q.density[i] = std::exp(lg[i] - lz);
  return q;
}

double QsdDensity::mass() const { return mass_between(x.front(), x.back()); }

double QsdDensity::mass_between(double lo, double hi) const {
  if (hi <= lo) return 0.0;
  lo = std::max(lo, x.front());
  hi = std::min(hi, x.back());
  auto at = [&](double t) {
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>((t - x.front()) / dx), x.size() - 2);
    double w = (t - x[i]) / dx;
    return (1.0 - w) * density[i] + w * density[i + 1];
  };
  std::size_t i0 = static_cast<std::size_t>(std::ceil((lo - x.front()) / dx - 1e-12));
  std::size_t i1 = static_cast<std::size_t>(std::floor((hi - x.front()) / dx + 1e-12));
  i1 = std::min(i1, x.size() - 1);
  if (i0 > i1) return 0.5 * (at(lo) + at(hi)) * (hi - lo);
  double m = 0.5 * (at(lo) + density[i0]) * (x[i0] - lo) + 0.5 * (density[i1] + at(hi)) * (hi - x[i1]);
  for (std::size_t i = i0; i < i1; ++i) m += 0.5 * (density[i] + density[i + 1]) * dx;
  return m;
}

}  // namespace kramers
