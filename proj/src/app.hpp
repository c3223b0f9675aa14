#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "config.hpp"
#include "json.hpp"
#include "kramers/asymptotics.hpp"
#include "kramers/errors.hpp"
#include "kramers/topology.hpp"

namespace kramers {

struct AppResult {
  int status = 0;  // 0 or 3 when an A0 failure is reported rather than thrown
  nlohmann::json data;
};

class Model {
 public:
  explicit Model(RunConfig cfg);

  const RunConfig& config() const { return cfg_; }
  const FieldPtr& field() const { return field_; }
  const DomainGeometry& geom() const { return cfg_.geom; }
  int dim() const { return cfg_.geom.dim(); }
  // cached per resolution; 0 means the config default
  std::shared_ptr<const WellDecomposition> decomposition(int resolution = 0) const;

 private:
  RunConfig cfg_;
  FieldPtr field_;
  mutable std::mutex mu_;
  mutable std::map<int, std::shared_ptr<const WellDecomposition>> cache_;
};

// options and results are JSON objects; see README for the keys
AppResult run_analyze(const Model& m, const nlohmann::json& opts);
AppResult run_predict(const Model& m, const nlohmann::json& opts);
AppResult run_simulate(const Model& m, const nlohmann::json& opts);
AppResult run_spectrum(const Model& m, const nlohmann::json& opts);
AppResult run_oracle(const Model& m, const nlohmann::json& opts);
AppResult run_compare(const Model& m, const nlohmann::json& opts);
AppResult run_evaluate(const Model& m, const nlohmann::json& opts);

// a single comparison row verdict, criterion one of abs, rel, sigma, upper
std::string row_verdict(double predicted, double measured, double uncertainty, double tolerance,
                        const std::string& criterion);

int exit_code_for(ErrorKind k);

}  // namespace kramers
