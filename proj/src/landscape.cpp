#include "kramers/landscape.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "kramers/errors.hpp"

namespace kramers {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Eig2 {
  double lo, hi;
  Point vlo;
};

Eig2 sym_eig(const std::array<double, 4>& H, int dim) {
  if (dim == 1) return {H[0], H[0], {1.0, 0.0}};
  double a = H[0], b = 0.5 * (H[1] + H[2]), d = H[3];
  double mean = 0.5 * (a + d);
  double r = std::hypot(0.5 * (a - d), b);
  Eig2 e{mean - r, mean + r, {1.0, 0.0}};
  // eigenvector for the smaller eigenvalue
  double vx, vy;
  if (std::abs(b) > 0.0) {
    vx = b;
    vy = e.lo - a;
    double alt_x = e.lo - d, alt_y = b;
    if (std::hypot(alt_x, alt_y) > std::hypot(vx, vy)) {
      vx = alt_x;
      vy = alt_y;
    }
  } else {
    vx = a <= d ? 1.0 : 0.0;
    vy = a <= d ? 0.0 : 1.0;
  }
  double nv = std::hypot(vx, vy);
  e.vlo = {vx / nv, vy / nv};
  // canonical orientation
  if (e.vlo[0] < 0.0 || (e.vlo[0] == 0.0 && e.vlo[1] < 0.0)) e.vlo = {-e.vlo[0], -e.vlo[1]};
  return e;
}

double norm2(const Point& g, int dim) { return dim == 1 ? g[0] * g[0] : g[0] * g[0] + g[1] * g[1]; }

bool newton(const PotentialField& f, const DomainGeometry& geom, Point p, double tol_grad, Point& out) {
  const int dim = geom.dim();
  const double scale = geom.diameter();
  for (int it = 0; it < 100; ++it) {
    Evaluation e = f.eval(p);
    double g2 = norm2(e.gradient, dim);
    if (std::sqrt(g2) < 1e-3 * tol_grad) {
      out = p;
      return true;
    }
    Point d{0.0, 0.0};
    const auto& H = e.hessian;
    if (dim == 1) {
      if (H[0] != 0.0) d[0] = -e.gradient[0] / H[0];
      else d[0] = -e.gradient[0];
    } else {
      double det = H[0] * H[3] - H[1] * H[2];
      double hn = std::abs(H[0]) + std::abs(H[1]) + std::abs(H[2]) + std::abs(H[3]);
      if (std::abs(det) > 1e-14 * hn * hn) {
        d[0] = -(H[3] * e.gradient[0] - H[1] * e.gradient[1]) / det;
        d[1] = -(-H[2] * e.gradient[0] + H[0] * e.gradient[1]) / det;
      } else {
        // gradient of 1/2 |grad f|^2 is H g
        d[0] = -(H[0] * e.gradient[0] + H[1] * e.gradient[1]);
        d[1] = -(H[2] * e.gradient[0] + H[3] * e.gradient[1]);
      }
    }
    double dn = std::sqrt(norm2(d, dim));
    if (dn > 0.25 * scale) {
      d[0] *= 0.25 * scale / dn;
      d[1] *= 0.25 * scale / dn;
    }
    double t = 1.0;
    bool accepted = false;
    Point q;
    while (t > 1e-12) {
      q = {p[0] + t * d[0], p[1] + t * d[1]};
      if (geom.boundary_distance(q) < 0.0) {
        Point gq;
        f.gradient(q, gq);
        double q2 = norm2(gq, dim);
        if (q2 < (1.0 - 1e-4 * t) * g2) {
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (std::sqrt(g2) < tol_grad) {
        out = p;
        return true;
      }
      return false;
    }
    p = q;
  }
  Point g;
  f.gradient(p, g);
  if (std::sqrt(norm2(g, dim)) < tol_grad) {
    out = p;
    return true;
  }
  return false;
}

bool lex_less(const Point& a, const Point& b) { return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]); }

std::vector<Point> seed_points(const PotentialField& f, const DomainGeometry& geom, int seeds_per_axis) {
  std::vector<Point> seeds;
  auto box = geom.bounding_box();
  const int dim = geom.dim();
  auto grid = [&](int n, bool lattice_minima) {
    double hx = (box[1] - box[0]) / n;
    double hy = dim == 2 ? (box[3] - box[2]) / n : 0.0;
    auto at = [&](int i, int j) -> Point {
      return {box[0] + (i + 0.5) * hx, dim == 2 ? box[2] + (j + 0.5) * hy : 0.0};
    };
    int ny = dim == 2 ? n : 1;
    if (!lattice_minima) {
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < n; ++i) {
          Point p = at(i, j);
          if (geom.contains(p)) seeds.push_back(p);
        }
      return;
    }
    std::vector<double> g2(static_cast<std::size_t>(n) * ny, std::numeric_limits<double>::infinity());
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < n; ++i) {
        Point p = at(i, j);
        if (!geom.contains(p)) continue;
        Point g;
        f.gradient(p, g);
        g2[static_cast<std::size_t>(j) * n + i] = norm2(g, dim);
      }
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < n; ++i) {
        double v = g2[static_cast<std::size_t>(j) * n + i];
        if (!std::isfinite(v)) continue;
        bool is_min = true;
        for (int dj = (dim == 2 ? -1 : 0); dj <= (dim == 2 ? 1 : 0) && is_min; ++dj)
          for (int di = -1; di <= 1; ++di) {
            if (!di && !dj) continue;
            int ii = i + di, jj = j + dj;
            if (ii < 0 || jj < 0 || ii >= n || jj >= ny) continue;
            if (g2[static_cast<std::size_t>(jj) * n + ii] < v) {
              is_min = false;
              break;
            }
          }
        if (is_min) seeds.push_back(at(i, j));
      }
  };
  grid(seeds_per_axis, false);
  grid(dim == 1 ? 1024 : 128, true);
  return seeds;
}

std::vector<CriticalPoint> search_criticals(const PotentialField& f, const DomainGeometry& geom, int seeds_per_axis,
                                            const LandscapeOptions& opts, std::string* degenerate) {
  if (seeds_per_axis < 8) raise(ErrorKind::InvalidArgument, "seeds_per_axis must be at least 8");
  const int dim = geom.dim();
  const double radius = 1e-6 * geom.diameter();
  std::vector<Point> found;
  std::vector<double> residual;
  for (const Point& s : seed_points(f, geom, seeds_per_axis)) {
    Point z;
    if (!newton(f, geom, s, opts.tol_grad, z)) continue;
    if (!geom.contains(z)) continue;
    Point g;
    f.gradient(z, g);
    if (std::sqrt(norm2(g, dim)) >= opts.tol_grad) continue;
    bool dup = false;
    for (const Point& q : found)
      if (std::hypot(q[0] - z[0], q[1] - z[1]) < radius) {
        dup = true;
        break;
      }
    if (!dup) {
      found.push_back(z);
      residual.push_back(std::sqrt(norm2(g, dim)));
    }
  }
  std::vector<CriticalPoint> out;
  for (std::size_t k = 0; k < found.size(); ++k) {
    const Point& z = found[k];
    Evaluation e = f.eval(z);
    Eig2 eg = sym_eig(e.hessian, dim);
    CriticalPoint c;
    c.location = z;
    c.value = e.value;
    c.hessian_det = dim == 1 ? e.hessian[0] : e.hessian[0] * e.hessian[3] - e.hessian[1] * e.hessian[2];
    c.eigenvalues = {eg.lo, eg.hi};
    c.neg_eigenvector = eg.vlo;
    c.index = (eg.lo < 0.0) + (dim == 2 && eg.hi < 0.0);
    if (c.index == 1) c.neg_eigenvalue = eg.lo;
    // slow Newton convergence leaves the location uncertain by |g| / |lambda|
    double smallest = std::min(std::abs(eg.lo), dim == 2 ? std::abs(eg.hi) : std::abs(eg.lo));
    bool loose = smallest == 0.0 || residual[k] / smallest > radius;
    if (std::abs(c.hessian_det) <= opts.tol_degenerate || loose) {
      std::ostringstream os;
      os.precision(10);
      os << "degenerate critical point at (" << z[0];
      if (dim == 2) os << ", " << z[1];
      os << "), det Hess = " << c.hessian_det;
      if (degenerate) {
        *degenerate = os.str();
        continue;
      }
      raise(ErrorKind::DegenerateCritical, os.str());
    }
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.value != b.value) return a.value < b.value;
    return lex_less(a.location, b.location);
  });
  return out;
}

double wrap_angle(double t) {
  while (t <= -kPi) t += 2.0 * kPi;
  while (t > kPi) t -= 2.0 * kPi;
  return t;
}

struct TraceDerivs {
  double value, d1, d2, dnf;
  Point p;
};

TraceDerivs trace_at(const PotentialField& f, const DomainGeometry& geom, double th) {
  const double r = geom.radius();
  Point p = geom.boundary_point(th);
  Evaluation e = f.eval(p);
  Point n{std::cos(th), std::sin(th)};
  Point t{-std::sin(th), std::cos(th)};
  const auto& H = e.hessian;
  double gt = e.gradient[0] * t[0] + e.gradient[1] * t[1];
  double gn = e.gradient[0] * n[0] + e.gradient[1] * n[1];
  double tHt = t[0] * (H[0] * t[0] + H[1] * t[1]) + t[1] * (H[2] * t[0] + H[3] * t[1]);
  return {e.value, r * gt, r * r * tHt - r * gn, gn, p};
}

struct TraceScan {
  std::vector<BoundaryCritical> crit;
  double min_grad = std::numeric_limits<double>::infinity();
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  std::string degenerate;
};

TraceScan scan_trace(const PotentialField& f, const DomainGeometry& geom, int samples, const LandscapeOptions& opts) {
  TraceScan s;
  if (geom.dim() == 1) {
    for (double side : {-1.0, 1.0}) {
      Point z = geom.boundary_point(side);
      Evaluation e = f.eval(z);
      BoundaryCritical b;
      b.location = z;
      b.coordinate = side;
      b.value = e.value;
      b.normal_derivative = side * e.gradient[0];
      b.tangential_second = 1.0;
      b.is_minimum = true;
      s.crit.push_back(b);
      s.min_grad = std::min(s.min_grad, std::abs(e.gradient[0]));
      s.vmin = std::min(s.vmin, e.value);
      s.vmax = std::max(s.vmax, e.value);
    }
    return s;
  }
  const int n = std::max(samples, 64);
  std::vector<double> th(n), v(n);
  for (int k = 0; k < n; ++k) {
    th[k] = wrap_angle(-kPi + 2.0 * kPi * (k + 0.5) / n);
    Point p = geom.boundary_point(th[k]);
    Point g;
    v[k] = f.gradient(p, g);
    s.min_grad = std::min(s.min_grad, std::sqrt(norm2(g, 2)));
    s.vmin = std::min(s.vmin, v[k]);
    s.vmax = std::max(s.vmax, v[k]);
  }
  const double scale = std::max(1.0, std::abs(s.vmax) + std::abs(s.vmin));
  if (s.vmax - s.vmin <= 1e-12 * scale) {
    s.degenerate = "boundary trace is constant";
    return s;
  }
  std::vector<double> roots;
  for (int k = 0; k < n; ++k) {
    double vp = v[(k + n - 1) % n], vn = v[(k + 1) % n];
    bool is_min = v[k] < vp && v[k] <= vn;
    bool is_max = v[k] > vp && v[k] >= vn;
    if (!is_min && !is_max) continue;
    double t = th[k];
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      TraceDerivs d = trace_at(f, geom, t);
      if (std::abs(d.d1) < 1e-13 * scale) {
        ok = true;
        break;
      }
      if (d.d2 == 0.0) break;
      double step = -d.d1 / d.d2;
      double lim = 2.0 * kPi / n;
      step = std::clamp(step, -lim, lim);
      t = wrap_angle(t + step);
    }
    TraceDerivs d = trace_at(f, geom, t);
    if (!ok && std::abs(d.d1) > 1e-9 * scale) continue;
    bool dup = false;
    for (double r : roots)
      if (std::abs(wrap_angle(r - t)) < 1e-7) dup = true;
    if (dup) continue;
    roots.push_back(t);
    BoundaryCritical b;
    b.location = d.p;
    b.coordinate = t;
    b.value = d.value;
    b.normal_derivative = d.dnf;
    b.tangential_second = d.d2 / (geom.radius() * geom.radius());
    b.is_minimum = b.tangential_second > 0.0;
    if (std::abs(b.tangential_second) <= opts.tol_degenerate && s.degenerate.empty()) {
      std::ostringstream os;
      os.precision(10);
      os << "degenerate critical point of the boundary trace at angle " << t;
      s.degenerate = os.str();
    }
    s.crit.push_back(b);
    s.vmin = std::min(s.vmin, b.value);
    s.vmax = std::max(s.vmax, b.value);
  }
  std::sort(s.crit.begin(), s.crit.end(),
            [](const BoundaryCritical& a, const BoundaryCritical& b) { return a.coordinate < b.coordinate; });
  return s;
}

std::vector<BoundarySaddle> saddles_from(const std::vector<BoundaryCritical>& crit) {
  std::vector<BoundarySaddle> out;
  for (const auto& c : crit) {
    if (!c.is_minimum || !(c.normal_derivative > 0.0)) continue;
    out.push_back({c.location, c.coordinate, c.value, c.normal_derivative, c.tangential_second});
  }
  std::sort(out.begin(), out.end(), [](const BoundarySaddle& a, const BoundarySaddle& b) {
    if (a.value != b.value) return a.value < b.value;
    return lex_less(a.location, b.location);
  });
  return out;
}

}  // namespace

std::vector<int> LandscapeAtlas::minima() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < interior_criticals.size(); ++i)
    if (interior_criticals[i].index == 0) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<CriticalPoint> find_critical_points(const PotentialField& field, const DomainGeometry& geom,
                                                int seeds_per_axis, const LandscapeOptions& opts) {
  auto out = search_criticals(field, geom, seeds_per_axis, opts, nullptr);
  if (out.empty()) raise(ErrorKind::NoCriticalPoints, "no critical point of f inside " + geom.describe());
  return out;
}

std::vector<BoundaryCritical> boundary_trace_criticals(const PotentialField& field, const DomainGeometry& geom,
                                                       int boundary_samples, const LandscapeOptions& opts) {
  return scan_trace(field, geom, boundary_samples, opts).crit;
}

std::vector<BoundarySaddle> find_boundary_saddles(const PotentialField& field, const DomainGeometry& geom,
                                                  int boundary_samples, const LandscapeOptions& opts) {
  TraceScan s = scan_trace(field, geom, boundary_samples, opts);
  if (s.min_grad <= opts.tol_grad)
    raise(ErrorKind::GradientVanishesOnBoundary, "grad f vanishes on the boundary of " + geom.describe());
  return saddles_from(s.crit);
}

LandscapeAtlas build_atlas(const PotentialField& field, const DomainGeometry& geom, const LandscapeOptions& opts) {
  if (field.dim() != geom.dim()) raise(ErrorKind::ConfigError, "potential and domain dimensions differ");
  LandscapeAtlas atlas;
  atlas.dim = geom.dim();
  std::string degenerate;
  atlas.interior_criticals = search_criticals(field, geom, opts.seeds_per_axis, opts, &degenerate);
  A0Clause morse{"interior_morse", degenerate.empty(),
                 degenerate.empty() ? std::to_string(atlas.interior_criticals.size()) + " nondegenerate critical points"
                                    : degenerate};
  int nmin = static_cast<int>(atlas.minima().size());
  A0Clause has_min{"has_local_minimum", nmin > 0, std::to_string(nmin) + " local minima"};
  TraceScan s = scan_trace(field, geom, opts.boundary_samples, opts);
  std::ostringstream gd;
  gd.precision(6);
  gd << "min |grad f| on boundary = " << s.min_grad;
  A0Clause grad{"boundary_gradient_nonzero", s.min_grad > opts.tol_grad, gd.str()};
  A0Clause trace{"boundary_trace_morse", s.degenerate.empty(),
                 s.degenerate.empty() ? std::to_string(s.crit.size()) + " nondegenerate trace critical points"
                                      : s.degenerate};
  atlas.boundary_trace = s.crit;
  atlas.boundary_saddles = saddles_from(s.crit);
  atlas.boundary_min = s.vmin;
  atlas.boundary_max = s.vmax;
  atlas.a0_report.clauses = {morse, has_min, grad, trace};
  atlas.a0_report.passed = morse.passed && has_min.passed && grad.passed && trace.passed;
  return atlas;
}

bool in_attraction_basin(const PotentialField& field, const DomainGeometry& geom, const Point& x,
                         const RegionIndicator& target, double t_max, double tol_grad) {
  namespace ode = boost::numeric::odeint;
  if (!geom.contains(x)) raise(ErrorKind::OutOfDomain, "start point outside the domain");
  const int dim = geom.dim();
  using State = std::array<double, 2>;
  auto rhs = [&](const State& s, State& ds, double) {
    Point g;
    field.gradient({s[0], s[1]}, g);
    ds[0] = -g[0];
    ds[1] = dim == 2 ? -g[1] : 0.0;
  };
  auto stepper = ode::make_controlled(1e-10, 1e-10, ode::runge_kutta_dopri5<State>());
  State s{x[0], dim == 2 ? x[1] : 0.0};
  double t = 0.0, dt = 1e-3;
  for (;;) {
    Point p{s[0], s[1]};
    Evaluation e = field.eval(p);
    if (std::sqrt(norm2(e.gradient, dim)) < tol_grad) {
      Eig2 eg = sym_eig(e.hessian, dim);
      if (eg.lo > 0.0) return target(p);
      raise(ErrorKind::FlowTimeout, "gradient flow stalls at a critical point that is not a minimum");
    }
    if (t > t_max) raise(ErrorKind::FlowTimeout, "gradient flow unresolved at t_max");
    State trial = s;
    double tt = t;
    int tries = 0;
    while (stepper.try_step(rhs, trial, tt, dt) == ode::fail) {
      if (++tries > 200) raise(ErrorKind::FlowTimeout, "step size control failed");
    }
    s = trial;
    t = tt;
    dt = std::min(dt, 10.0);
    if (!geom.contains({s[0], s[1]})) return false;
  }
}

}  // namespace kramers
