#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wavesys {

// Error taxonomy, mirrored by the CLI exit codes:
//   DomainError and subclasses -> usage error, exit 2
//   ScientificFailure          -> in-band scientific failure, exit 1
//   NumericError               -> numeric failure (quadrature etc.), exit 3

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotInBlowupRegion : DomainError {
  using DomainError::DomainError;
};

struct ConditionY12Violated : DomainError {
  using DomainError::DomainError;
};

struct EmptyMuWindow : DomainError {
  using DomainError::DomainError;
};

struct SingularCurveParameter : DomainError {
  using DomainError::DomainError;
};

struct InsufficientData : DomainError {
  using DomainError::DomainError;
};

// Asking a grid operator for a time level that has not been computed yet.
struct SequencingError : std::logic_error {
  using std::logic_error::logic_error;
};

// A run or sweep that completed mechanically but failed its scientific goal
// (horizon too short, partial fit, missing levels). Reported, not a bug.
struct ScientificFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HorizonTooShort : ScientificFailure {
  double eps;
  explicit HorizonTooShort(double e, const std::string& msg)
      : ScientificFailure(msg), eps(e) {}
};

struct PartialFitError : ScientificFailure {
  std::vector<double> failed_kappas;
  PartialFitError(std::vector<double> failed, const std::string& msg)
      : ScientificFailure(msg), failed_kappas(std::move(failed)) {}
};

struct InsufficientRun : ScientificFailure {
  using ScientificFailure::ScientificFailure;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wavesys
