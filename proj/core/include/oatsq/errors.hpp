#pragma once

#include <stdexcept>
#include <string>

namespace oatsq {

enum class ErrorCode {
  NonHalfIntegerSpin,
  NegativeGamma,
  AngleOutOfRange,
  SpinTooLargeForDense,
  MomentOrderOutOfRange,
  VanishingMeanSpin,
  NegativeVariance,
  PoleState,
  ZeroTime,
  NonpositiveGamma,
  StepTooLarge,
  NoMinimumFound,
  EmptyGrid,
  NonpositiveData,
  FitDegenerate,
};

const char* to_string(ErrorCode code) noexcept;

/// Structured error carrying a code and the name of the offending field.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string field, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace oatsq
