#include "kramers/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "kramers/errors.hpp"

namespace kramers {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// xoshiro256**, one independent stream per (seed, path)
class PathRng {
 public:
  using result_type = std::uint64_t;
  PathRng(std::uint64_t seed, std::uint64_t path) {
    std::uint64_t k = seed;
    std::uint64_t mix = splitmix64(k) ^ (path * 0xD1B54A32D192ED03ull);
    for (auto& w : s_) w = splitmix64(mix);
  }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() {
    const std::uint64_t r = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return r;
  }
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

struct Exit {
  bool hit = false;
  double fraction = 0.0;  // time of the crossing inside the last step, in steps
  long steps = 0;
  Point point{0.0, 0.0};
};

class Walker {
 public:
  Walker(const PotentialField& f, const DomainGeometry& g, const SimConfig& c)
      : f_(f), g_(g), dt_(c.dt), sq_(std::sqrt(c.h * c.dt)), var_(c.h * c.dt), bridge_(c.bridge) {}

  // advances up to n steps; stops at the first exit
  Exit run(Point& x, long n, PathRng& rng) const { return g_.dim() == 1 ? run1(x, n, rng) : run2(x, n, rng); }

 private:
  Exit run1(Point& x, long n, PathRng& rng) const {
    boost::random::normal_distribution<double> normal;
    const double a = g_.a(), b = g_.b();
    const double near = 15.0 * var_;
    double x0 = x[0];
    Point gr;
    Exit e;
    for (long k = 0; k < n; ++k) {
      f_.gradient({x0, 0.0}, gr);
      double x1 = x0 - gr[0] * dt_ + sq_ * normal(rng);
      if (x1 <= a || x1 >= b) {
        bool left = x1 <= a;
        double z = left ? a : b;
        e.hit = true;
        e.steps = k;
        e.fraction = (x0 - z) / (x0 - x1);
        e.point = {z, 0.0};
        x = e.point;
        return e;
      }
      if (bridge_) {
        double da = (x0 - a) * (x1 - a), db = (b - x0) * (b - x1);
        if (da < near || db < near) {
          double pa = std::exp(-2.0 * da / var_), pb = std::exp(-2.0 * db / var_);
          double u = rng.uniform();
          if (u < pa + pb) {
            bool left = u < pa;
            double d0 = left ? x0 - a : b - x0, d1 = left ? x1 - a : b - x1;
            e.hit = true;
            e.steps = k;
            e.fraction = d0 / (d0 + d1);
            e.point = {left ? a : b, 0.0};
            x = e.point;
            return e;
          }
        }
      }
      x0 = x1;
    }
    x = {x0, 0.0};
    e.steps = n;
    return e;
  }

  Exit run2(Point& x, long n, PathRng& rng) const {
    boost::random::normal_distribution<double> normal;
    const Point c = g_.center();
    const double R = g_.radius();
    const double near = 15.0 * var_;
    Point p{x[0] - c[0], x[1] - c[1]};
    Point gr;
    Exit e;
    for (long k = 0; k < n; ++k) {
      f_.gradient({p[0] + c[0], p[1] + c[1]}, gr);
      Point q{p[0] - gr[0] * dt_ + sq_ * normal(rng), p[1] - gr[1] * dt_ + sq_ * normal(rng)};
      double rq2 = q[0] * q[0] + q[1] * q[1];
      if (rq2 >= R * R) {
        Point d{q[0] - p[0], q[1] - p[1]};
        double dd = d[0] * d[0] + d[1] * d[1], pd = p[0] * d[0] + p[1] * d[1], pp = p[0] * p[0] + p[1] * p[1];
        double th = (-pd + std::sqrt(std::max(0.0, pd * pd - dd * (pp - R * R)))) / dd;
        th = std::clamp(th, 0.0, 1.0);
        finish(e, k, th, {p[0] + th * d[0], p[1] + th * d[1]}, c, R);
        x = e.point;
        return e;
      }
      if (bridge_) {
        double r0 = std::sqrt(p[0] * p[0] + p[1] * p[1]), r1 = std::sqrt(rq2);
        double prod = (R - r0) * (R - r1);
        if (prod < near) {
          double u = rng.uniform();
          if (u < std::exp(-2.0 * prod / var_)) {
            double th = (R - r0) / ((R - r0) + (R - r1));
            finish(e, k, th, {p[0] + th * (q[0] - p[0]), p[1] + th * (q[1] - p[1])}, c, R);
            x = e.point;
            return e;
          }
        }
      }
      p = q;
    }
    x = {p[0] + c[0], p[1] + c[1]};
    e.steps = n;
    return e;
  }

  static void finish(Exit& e, long k, double th, Point v, const Point& c, double R) {
    double r = std::hypot(v[0], v[1]);
    if (r == 0.0) v = {R, 0.0}, r = R;
    e.hit = true;
    e.steps = k;
    e.fraction = th;
    e.point = {c[0] + R * v[0] / r, c[1] + R * v[1] / r};
  }

  const PotentialField& f_;
  const DomainGeometry& g_;
  double dt_, sq_, var_;
  bool bridge_;
};

constexpr long kMaxBurnAttempts = 10000;

void validate(const DomainGeometry& geom, const SimConfig& cfg) {
  if (!(cfg.h > 0.0)) raise(ErrorKind::InvalidArgument, "h must be positive");
  if (!(cfg.dt > 0.0)) raise(ErrorKind::InvalidArgument, "dt must be positive");
  if (cfg.dt > cfg.h / 50.0 * (1.0 + 1e-12))
    raise(ErrorKind::InvalidArgument, "dt must not exceed h/50");
  if (cfg.n_paths < 1) raise(ErrorKind::InvalidArgument, "need at least one path");
  if (cfg.max_steps < 1) raise(ErrorKind::InvalidArgument, "max_steps must be positive");
  if (cfg.start) {
    if (!geom.contains(*cfg.start) || geom.on_boundary(*cfg.start))
      raise(ErrorKind::OutOfDomain, "start point is not inside the domain");
  } else {
    if (!cfg.burn_in) raise(ErrorKind::InvalidArgument, "either a start point or a burn-in is required");
    if (!(cfg.burn_in->burn_time > 0.0)) raise(ErrorKind::InvalidArgument, "burn time must be positive");
    if (!geom.contains(cfg.burn_in->origin) || geom.on_boundary(cfg.burn_in->origin))
      raise(ErrorKind::OutOfDomain, "burn-in origin is not inside the domain");
  }
}

template <class Work>
void parallel_paths(long n, int threads, Work work) {
  std::atomic<long> next{0};
  auto worker = [&] {
    for (;;) {
      long lo = next.fetch_add(256);
      if (lo >= n) return;
      long hi = std::min(n, lo + 256);
      for (long i = lo; i < hi; ++i)
        if (!work(i)) return;
    }
  };
  threads = static_cast<int>(std::min<long>(threads, (n + 255) / 256));
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// burn-in from the origin until a path survives; returns attempts, 0 when the cap is hit
long burn(const Walker& w, const SimConfig& cfg, PathRng& rng, Point& x) {
  long steps = std::llround(cfg.burn_in->burn_time / cfg.dt);
  for (long att = 1; att <= kMaxBurnAttempts; ++att) {
    x = cfg.burn_in->origin;
    if (!w.run(x, steps, rng).hit) return att;
  }
  return 0;
}

void check_rejection(long attempts, long accepted, bool capped) {
  if (capped) raise(ErrorKind::BurnInInfeasible, "a path failed every burn-in attempt; burn time far exceeds 1/lambda_h");
  double rate = attempts > 0 ? 1.0 - static_cast<double>(accepted) / attempts : 0.0;
  if (rate > 0.999) raise(ErrorKind::BurnInInfeasible, "burn-in rejection rate above 99.9%");
}

void pieces(const BoundaryRegion& r, std::vector<std::pair<double, double>>& out) {
  if (r.lo <= r.hi) {
    out.push_back({r.lo, r.hi});
  } else {
    out.push_back({r.lo, std::numbers::pi});
    out.push_back({-std::numbers::pi, r.hi});
  }
}

}  // namespace

bool BoundaryRegion::contains(double c) const { return lo <= hi ? (c >= lo && c <= hi) : (c >= lo || c <= hi); }

Interval wilson_interval(long k, long n, double z) {
  if (n <= 0) return {0.0, 1.0};
  double p = static_cast<double>(k) / n, z2 = z * z / n;
  double center = (p + 0.5 * z2) / (1.0 + z2);
  double half = z / (1.0 + z2) * std::sqrt(p * (1.0 - p) / n + 0.25 * z * z / (static_cast<double>(n) * n));
  Interval iv{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (k == 0) iv.low = 0.0;
  if (k == n) iv.high = 1.0;
  return iv;
}

int sampler_threads(int requested) {
  int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  int cap = hw;
  if (const char* env = std::getenv("KRAMERS_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) cap = v;
  }
  int t = requested > 0 ? std::min(requested, cap) : cap;
  return std::max(1, t);
}

SimResult simulate_exit(const PotentialField& field, const DomainGeometry& geom, const SimConfig& cfg) {
  validate(geom, cfg);
  SimResult res;
  res.records.resize(cfg.n_paths);
  std::vector<long> attempts(cfg.n_paths, 0);
  std::atomic<bool> capped{false};
  Walker w(field, geom, cfg);
  parallel_paths(cfg.n_paths, sampler_threads(cfg.threads), [&](long i) {
    if (capped.load(std::memory_order_relaxed)) return false;
    PathRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    ExitRecord& r = res.records[i];
    r.path_id = i;
    Point x;
    if (cfg.start) {
      x = *cfg.start;
    } else {
      attempts[i] = burn(w, cfg, rng, x);
      if (attempts[i] == 0) {
        capped = true;
        return false;
      }
    }
    r.start_used = x;
    Exit e = w.run(x, cfg.max_steps, rng);
    if (e.hit) {
      r.exit_time = (e.steps + e.fraction) * cfg.dt;
      r.exit_point = e.point;
      r.boundary_coordinate = geom.boundary_coordinate(e.point);
    } else {
      r.censored = true;
      r.exit_time = cfg.max_steps * cfg.dt;
      r.exit_point = x;
      r.boundary_coordinate = std::numeric_limits<double>::quiet_NaN();
    }
    return true;
  });
  if (!cfg.start) {
    for (long a : attempts) res.burn_attempts += a;
    check_rejection(res.burn_attempts, cfg.n_paths, capped);
    res.rejection_rate = 1.0 - static_cast<double>(cfg.n_paths) / res.burn_attempts;
  }
  for (const auto& r : res.records) res.censored += r.censored;
  if (2 * res.censored > cfg.n_paths)
    raise(ErrorKind::CensoredMajority, std::to_string(res.censored) + " of " + std::to_string(cfg.n_paths) +
                                           " paths censored; increase max_steps or dt");
  return res;
}

QsdStarts sample_qsd_start(const PotentialField& field, const DomainGeometry& geom, const SimConfig& cfg) {
  SimConfig c = cfg;
  c.start.reset();
  validate(geom, c);
  QsdStarts q;
  q.points.resize(c.n_paths);
  std::vector<long> attempts(c.n_paths, 0);
  std::atomic<bool> capped{false};
  Walker w(field, geom, c);
  parallel_paths(c.n_paths, sampler_threads(c.threads), [&](long i) {
    if (capped.load(std::memory_order_relaxed)) return false;
    PathRng rng(c.seed, static_cast<std::uint64_t>(i));
    attempts[i] = burn(w, c, rng, q.points[i]);
    if (attempts[i] == 0) {
      capped = true;
      return false;
    }
    return true;
  });
  for (long a : attempts) q.attempts += a;
  check_rejection(q.attempts, c.n_paths, capped);
  q.rejection_rate = 1.0 - static_cast<double>(c.n_paths) / q.attempts;
  return q;
}

ExitHistogram aggregate(const SimResult& result, const std::vector<BoundaryRegion>& regions) {
  std::vector<std::pair<double, double>> pa, pb;
  for (std::size_t i = 0; i < regions.size(); ++i)
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      pa.clear();
      pb.clear();
      pieces(regions[i], pa);
      pieces(regions[j], pb);
      for (auto& x : pa)
        for (auto& y : pb)
          if (std::max(x.first, y.first) <= std::min(x.second, y.second))
            raise(ErrorKind::OverlappingRegions, "regions '" + regions[i].name + "' and '" + regions[j].name + "' overlap");
    }
  ExitHistogram hist;
  for (const auto& r : regions) hist.bins.push_back({r.name, r.lo, r.hi, 0, 0.0, 0.0, 1.0});
  hist.bins.push_back({"elsewhere", 0.0, 0.0, 0, 0.0, 0.0, 1.0});
  for (const auto& rec : result.records) {
    if (rec.censored) {
      ++hist.censored;
      continue;
    }
    ++hist.n;
    std::size_t k = 0;
    while (k < regions.size() && !regions[k].contains(rec.boundary_coordinate)) ++k;
    ++hist.bins[k].count;
  }
  for (auto& b : hist.bins) {
    if (hist.n == 0) continue;
    b.p = static_cast<double>(b.count) / hist.n;
    Interval iv = wilson_interval(b.count, hist.n);
    b.ci_low = iv.low;
    b.ci_high = iv.high;
  }
  return hist;
}

IndependenceReport independence_check(const SimResult& result, const std::vector<BoundaryRegion>& regions) {
  ExitHistogram hist = aggregate(result, regions);
  IndependenceReport rep;
  rep.n = hist.n;
  if (rep.n < 10000) raise(ErrorKind::InsufficientSamples, "independence check needs at least 10^4 exits");
  std::size_t dom = 0;
  for (std::size_t k = 0; k < hist.bins.size(); ++k)
    if (hist.bins[k].count > hist.bins[dom].count) dom = k;
  rep.dominant = hist.bins[dom].name;
  std::vector<double> tau;
  std::vector<int> ind;
  for (const auto& r : result.records) {
    if (r.censored) continue;
    tau.push_back(r.exit_time);
    int in = dom < regions.size() ? regions[dom].contains(r.boundary_coordinate) : 1;
    if (dom == regions.size()) {
      in = 1;
      for (const auto& g : regions)
        if (g.contains(r.boundary_coordinate)) in = 0;
    }
    ind.push_back(in);
  }
  const double n = static_cast<double>(tau.size());
  double mt = 0.0, mi = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    mt += tau[i];
    mi += ind[i];
  }
  mt /= n;
  mi /= n;
  double stt = 0.0, sii = 0.0, sti = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    double a = tau[i] - mt, b = ind[i] - mi;
    stt += a * a;
    sii += b * b;
    sti += a * b;
  }
  rep.mean_tau = mt;
  rep.correlation = (stt > 0.0 && sii > 0.0) ? sti / std::sqrt(stt * sii) : 0.0;
  rep.correlation_threshold = 3.0 / std::sqrt(n);
  double r = rep.correlation;
  double t = r * std::sqrt((n - 2.0) / std::max(1e-300, 1.0 - r * r));
  rep.p_value = std::erfc(std::abs(t) / std::numbers::sqrt2);
  std::sort(tau.begin(), tau.end());
  double d = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    double F = -std::expm1(-tau[i] / mt);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  rep.ks = d;
  rep.ks_threshold = 1.63 / std::sqrt(n);
  return rep;
}

std::vector<BoundaryRegion> default_regions(const DomainGeometry& geom) {
  if (geom.dim() == 1) return {{"left", -1.0, -1.0}, {"right", 1.0, 1.0}};
  return {};
}

std::vector<BoundaryRegion> parse_regions(const std::string& spec, const DomainGeometry& geom) {
  std::vector<BoundaryRegion> out;
  std::stringstream ss(spec);
  std::string item;
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) raise(ErrorKind::ConfigError, "bad number '" + s + "' in region spec");
    return v;
  };
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    auto colon = item.find(':');
    BoundaryRegion r;
    if (colon == std::string::npos) {
      if (geom.dim() == 1 && (item == "left" || item == "right")) {
        double c = item == "left" ? -1.0 : 1.0;
        out.push_back({item, c, c});
        continue;
      }
      raise(ErrorKind::ConfigError, "region '" + item + "' must read name:lo..hi");
    }
    r.name = item.substr(0, colon);
    std::string range = item.substr(colon + 1);
    if (geom.dim() == 1 && (range == "left" || range == "right")) {
      r.lo = r.hi = range == "left" ? -1.0 : 1.0;
      out.push_back(r);
      continue;
    }
    auto dots = range.find("..");
    if (dots == std::string::npos) raise(ErrorKind::ConfigError, "region '" + item + "' must read name:lo..hi");
    r.lo = num(range.substr(0, dots));
    r.hi = num(range.substr(dots + 2));
    if (geom.dim() == 1 && r.lo > r.hi) raise(ErrorKind::ConfigError, "region '" + item + "' has lo > hi");
    out.push_back(r);
  }
  if (out.empty()) raise(ErrorKind::ConfigError, "empty region spec");
  return out;
}

}  // namespace kramers
