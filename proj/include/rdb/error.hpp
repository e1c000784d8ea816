#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rdb {

enum class ErrorKind {
  InvalidDimension,
  InvalidResolution,
  InvalidArgument,
  NegativeTime,
  NonpositiveTime,
  NonpositiveDiffusivity,
  InvalidOrder,
  DegenerateSampleSpec,
  NonuniformTimeLattice,
  TooFewFrames,
  EmptySample,
  PreconditionViolation,
  CylinderOutOfRange,
  EmptyCylinder,
  EmptyFamily,
  DegenerateField,
  EmptyDomain,
  UnknownModel,
  IndexOutOfRange,
  QuadratureUnderresolved,
  BlowUpDetected,
  Instability,
  ConfigParse,
  AssumptionViolation,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace rdb
