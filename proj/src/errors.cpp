#include "kramers/errors.hpp"

namespace kramers {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::NonSmoothFunction: return "NonSmoothFunction";
    case ErrorKind::EvaluationError: return "EvaluationError";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::NotOnBoundary: return "NotOnBoundary";
    case ErrorKind::DegenerateCritical: return "DegenerateCritical";
    case ErrorKind::NoCriticalPoints: return "NoCriticalPoints";
    case ErrorKind::GradientVanishesOnBoundary: return "GradientVanishesOnBoundary";
    case ErrorKind::FlowTimeout: return "FlowTimeout";
    case ErrorKind::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorKind::AmbiguousBranch: return "AmbiguousBranch";
    case ErrorKind::UnlabeledMinimum: return "UnlabeledMinimum";
    case ErrorKind::AssumptionsViolated: return "AssumptionsViolated";
    case ErrorKind::HypothesesNotCertified: return "HypothesesNotCertified";
    case ErrorKind::MinimumNotInCmax: return "MinimumNotInCmax";
    case ErrorKind::WellHypothesisViolated: return "WellHypothesisViolated";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::CensoredMajority: return "CensoredMajority";
    case ErrorKind::BurnInInfeasible: return "BurnInInfeasible";
    case ErrorKind::OverlappingRegions: return "OverlappingRegions";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::UnderResolved: return "UnderResolved";
    case ErrorKind::ScalingFailure: return "ScalingFailure";
    case ErrorKind::NegativeDensity: return "NegativeDensity";
    case ErrorKind::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ErrorFamily family_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownIdentifier:
    case ErrorKind::NonSmoothFunction:
    case ErrorKind::ConfigError:
      return ErrorFamily::Config;
    case ErrorKind::InvalidArgument:
    case ErrorKind::OverlappingRegions:
      return ErrorFamily::Usage;
    case ErrorKind::DegenerateCritical:
    case ErrorKind::NoCriticalPoints:
    case ErrorKind::GradientVanishesOnBoundary:
      return ErrorFamily::A0;
    case ErrorKind::AssumptionsViolated:
    case ErrorKind::HypothesesNotCertified:
    case ErrorKind::MinimumNotInCmax:
    case ErrorKind::WellHypothesisViolated:
    case ErrorKind::ShapeMismatch:
      return ErrorFamily::Hypothesis;
    default:
      return ErrorFamily::Numerical;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + message), kind_(kind) {}

static std::string syntax_message(std::size_t position, const std::vector<std::string>& expected,
                                  const std::string& found) {
  std::string m = "at position " + std::to_string(position) + ", found " + found + ", expected one of {";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) m += ", ";
    m += expected[i];
  }
  return m + "}";
}

SyntaxError::SyntaxError(std::size_t position, std::vector<std::string> expected, const std::string& found)
    : Error(ErrorKind::SyntaxError, syntax_message(position, expected, found)),
      position_(position),
      expected_(std::move(expected)) {}

void raise(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace kramers
