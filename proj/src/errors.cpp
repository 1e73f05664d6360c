#include "bn2o/errors.hpp"

namespace bn2o {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::DanglingLink: return "DanglingLink";
    case ErrorCode::EmptyNetwork: return "EmptyNetwork";
    case ErrorCode::UnknownFinding: return "UnknownFinding";
    case ErrorCode::UnknownDisease: return "UnknownDisease";
    case ErrorCode::IncompleteInstance: return "IncompleteInstance";
    case ErrorCode::EvidenceOverlap: return "EvidenceOverlap";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InfeasibleConfig: return "InfeasibleConfig";
    case ErrorCode::TooManyDiseases: return "TooManyDiseases";
    case ErrorCode::TooManyPositiveFindings: return "TooManyPositiveFindings";
    case ErrorCode::ZeroEvidenceProbability: return "ZeroEvidenceProbability";
    case ErrorCode::PositiveEvidencePresent: return "PositiveEvidencePresent";
    case ErrorCode::AllZeroWeights: return "AllZeroWeights";
    case ErrorCode::InsufficientBatches: return "InsufficientBatches";
    case ErrorCode::AllHypothesesExcluded: return "AllHypothesesExcluded";
    case ErrorCode::NumericalInstability: return "NumericalInstability";
    case ErrorCode::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "UnknownError";
}

}  // namespace bn2o
