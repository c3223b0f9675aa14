#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kramers/geometry.hpp"
#include "kramers/potential.hpp"

namespace kramers {

struct QsdBurnIn {
  double burn_time = 5.0;
  Point origin{0.0, 0.0};  // a point of C_max
};

struct SimConfig {
  double h = 0.3;
  double dt = 0.003;
  long n_paths = 1000;
  std::uint64_t seed = 42;
  long max_steps = 10000000;
  std::optional<Point> start;
  std::optional<QsdBurnIn> burn_in;  // used when start is empty
  bool bridge = true;                // Brownian-bridge crossing test between steps
  int threads = 0;                   // 0: KRAMERS_THREADS or hardware count
};

struct ExitRecord {
  long path_id = 0;
  double exit_time = 0.0;
  Point exit_point{0.0, 0.0};
  double boundary_coordinate = 0.0;
  Point start_used{0.0, 0.0};
  bool censored = false;
};

struct SimResult {
  std::vector<ExitRecord> records;  // ordered by path id
  long censored = 0;
  long burn_attempts = 0;
  double rejection_rate = 0.0;
};

struct QsdStarts {
  std::vector<Point> points;
  long attempts = 0;
  double rejection_rate = 0.0;
};

// a closed arc (or endpoint set in 1D) of the boundary in chart coordinates
struct BoundaryRegion {
  std::string name;
  double lo = 0.0, hi = 0.0;
  bool contains(double coordinate) const;
};

struct HistogramBin {
  std::string name;
  double lo = 0.0, hi = 0.0;
  long count = 0;
  double p = 0.0;
  double ci_low = 0.0, ci_high = 0.0;  // Wilson 95%
};

struct ExitHistogram {
  std::vector<HistogramBin> bins;  // the regions followed by "elsewhere"
  long n = 0;                      // uncensored paths
  long censored = 0;
  bool empty() const { return n == 0; }
};

struct IndependenceReport {
  long n = 0;
  double mean_tau = 0.0;
  double ks = 0.0;
  double ks_threshold = 0.0;  // 1.63 / sqrt n
  std::string dominant;
  double correlation = 0.0;
  double correlation_threshold = 0.0;  // 3 / sqrt n
  double p_value = 1.0;
};

struct Interval {
  double low = 0.0, high = 0.0;
};

Interval wilson_interval(long k, long n, double z = 1.96);
int sampler_threads(int requested = 0);

SimResult simulate_exit(const PotentialField& field, const DomainGeometry& geom, const SimConfig& cfg);
QsdStarts sample_qsd_start(const PotentialField& field, const DomainGeometry& geom, const SimConfig& cfg);
ExitHistogram aggregate(const SimResult& result, const std::vector<BoundaryRegion>& regions);
IndependenceReport independence_check(const SimResult& result, const std::vector<BoundaryRegion>& regions);

// "name:lo..hi;name:lo..hi", with "left" and "right" accepted as 1D names
std::vector<BoundaryRegion> parse_regions(const std::string& spec, const DomainGeometry& geom);
std::vector<BoundaryRegion> default_regions(const DomainGeometry& geom);

}  // namespace kramers
