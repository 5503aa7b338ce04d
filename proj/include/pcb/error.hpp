#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcb {

enum class ErrorCode {
  ShapeMismatch,
  ZeroRowTotal,
  ZeroGrandTotal,
  InvalidProbability,
  InvalidData,
  SyntaxError,
  IndexOutOfRange,
  UnsupportedQuery,
  EmptySequence,
  InfeasibleInterval,
  ZeroEvidenceProbability,
  NotBinary,
  InconsistentDataset,
  Infeasible,
  BudgetExceeded,
  IoError,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error(ErrorCode::SyntaxError,
              message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace pcb
