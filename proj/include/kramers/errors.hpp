#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kramers {

enum class ErrorKind {
  SyntaxError,
  UnknownIdentifier,
  NonSmoothFunction,
  EvaluationError,
  OutOfDomain,
  NotOnBoundary,
  DegenerateCritical,
  NoCriticalPoints,
  GradientVanishesOnBoundary,
  FlowTimeout,
  ResolutionTooCoarse,
  AmbiguousBranch,
  UnlabeledMinimum,
  AssumptionsViolated,
  HypothesesNotCertified,
  MinimumNotInCmax,
  WellHypothesisViolated,
  ShapeMismatch,
  CensoredMajority,
  BurnInInfeasible,
  OverlappingRegions,
  InsufficientSamples,
  UnderResolved,
  ScalingFailure,
  NegativeDensity,
  QuadratureNonConvergence,
  ConfigError,
  InvalidArgument,
};

// Broad families used for exit codes and the C status values.
enum class ErrorFamily { Config, Usage, A0, Hypothesis, Numerical };

const char* kind_name(ErrorKind k);
ErrorFamily family_of(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::vector<std::string> expected, const std::string& found);
  std::size_t position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

}  // namespace kramers
