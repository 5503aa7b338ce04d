#include "pcb/error.hpp"

namespace pcb {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ZeroRowTotal: return "ZeroRowTotal";
    case ErrorCode::ZeroGrandTotal: return "ZeroGrandTotal";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::InvalidData: return "InvalidData";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnsupportedQuery: return "UnsupportedQuery";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::InfeasibleInterval: return "InfeasibleInterval";
    case ErrorCode::ZeroEvidenceProbability: return "ZeroEvidenceProbability";
    case ErrorCode::NotBinary: return "NotBinary";
    case ErrorCode::InconsistentDataset: return "InconsistentDataset";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace pcb
