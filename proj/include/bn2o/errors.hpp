#ifndef BN2O_ERRORS_HPP
#define BN2O_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bn2o {

enum class ErrorCode {
  // validation
  DuplicateId,
  ProbabilityOutOfRange,
  DanglingLink,
  EmptyNetwork,
  UnknownFinding,
  UnknownDisease,
  IncompleteInstance,
  EvidenceOverlap,
  ParseError,
  InvalidConfig,
  InfeasibleConfig,
  // inference
  TooManyDiseases,
  TooManyPositiveFindings,
  ZeroEvidenceProbability,
  PositiveEvidencePresent,
  AllZeroWeights,
  InsufficientBatches,
  AllHypothesesExcluded,
  NumericalInstability,
  RejectionBudgetExceeded,
  // I/O
  IoFailure,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

// Bad inputs: malformed files, invariant violations, unknown ids. CLI exit code 2.
class ValidationError : public Error {
public:
  using Error::Error;
};

// Malformed document; carries the position the parser stopped at when the
// failure is positional (syntax errors), zero otherwise.
class ParseError : public ValidationError {
public:
  ParseError(const std::string& message, std::size_t byte_position)
      : ValidationError(ErrorCode::ParseError,
                        byte_position > 0
                            ? message + " (byte " + std::to_string(byte_position) + ")"
                            : message),
        byte_position_(byte_position) {}

  std::size_t byte_position() const { return byte_position_; }

private:
  std::size_t byte_position_;
};

// An inference operation could not produce a result. CLI exit code 3.
class InferenceError : public Error {
public:
  using Error::Error;
};

// Filesystem failures. CLI exit code 4.
class IoError : public Error {
public:
  explicit IoError(const std::string& message) : Error(ErrorCode::IoFailure, message) {}
};

}  // namespace bn2o

#endif
