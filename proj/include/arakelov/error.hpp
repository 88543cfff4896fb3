#pragma once

#include <stdexcept>
#include <string>

namespace arakelov {

enum class ErrorKind {
  InvalidInput,
  NotPositiveDefinite,
  AllCensored,
  RadiusOverflow,
  NotOnTheta,
  DuplicateBranchPoint,
  EvenCount,
  NonSymmetric,
  BadCutLayout,
  CalibrationFailed,
  VanishingEvenThetaConstant,
  GenusTooLarge,
  PathClearanceFailure,
  WrongDegree,
  EnvelopeTooSmall,
  CoincidentPoints,
  ParameterTooLarge,
  DegreeTooHigh,
};

const char* error_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  const char* name() const { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace arakelov
