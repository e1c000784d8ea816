#include "rdb/error.hpp"

namespace rdb {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::InvalidResolution: return "invalid-resolution";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::NegativeTime: return "negative-time";
    case ErrorKind::NonpositiveTime: return "nonpositive-time";
    case ErrorKind::NonpositiveDiffusivity: return "nonpositive-diffusivity";
    case ErrorKind::InvalidOrder: return "invalid-order";
    case ErrorKind::DegenerateSampleSpec: return "degenerate-sample-spec";
    case ErrorKind::NonuniformTimeLattice: return "nonuniform-time-lattice";
    case ErrorKind::TooFewFrames: return "too-few-frames";
    case ErrorKind::EmptySample: return "empty-sample";
    case ErrorKind::PreconditionViolation: return "precondition-violation";
    case ErrorKind::CylinderOutOfRange: return "cylinder-out-of-range";
    case ErrorKind::EmptyCylinder: return "empty-cylinder";
    case ErrorKind::EmptyFamily: return "empty-family";
    case ErrorKind::DegenerateField: return "degenerate-field";
    case ErrorKind::EmptyDomain: return "empty-domain";
    case ErrorKind::UnknownModel: return "unknown-model";
    case ErrorKind::IndexOutOfRange: return "index-out-of-range";
    case ErrorKind::QuadratureUnderresolved: return "quadrature-underresolved";
    case ErrorKind::BlowUpDetected: return "blow-up-detected";
    case ErrorKind::Instability: return "instability";
    case ErrorKind::ConfigParse: return "config-parse-error";
    case ErrorKind::AssumptionViolation: return "assumption-violation";
    case ErrorKind::Io: return "io-error";
  }
  return "unknown-error";
}

}  // namespace rdb
