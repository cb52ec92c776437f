#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reallog {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  LengthMismatch,
  NonFiniteEntry,
  SingularMatrix,
  SingularMap,
  ConvergenceFailure,
  Overflow,
  NotInK,
  NotInKStar,
  NegativeAxisEigenvalue,
  UnsupportedJordanStructure,
  InconsistentJordanProfile,
  NotAnEigenvalue,
  NotScalarImage,
  DegenerateRecovery,
  DegenerateAngle,
  NonpositiveDeterminant,
  SampleBudgetExceeded,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (notably the CLI) can map it to an exit status without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures caused by bad input rather than by numerics.
  bool is_input_error() const noexcept {
    return code_ == ErrorCode::InvalidArgument || code_ == ErrorCode::DimensionMismatch ||
           code_ == ErrorCode::LengthMismatch || code_ == ErrorCode::NonFiniteEntry;
  }

 private:
  ErrorCode code_;
};

}  // namespace reallog
