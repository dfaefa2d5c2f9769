#include "fracgs/error.hpp"

namespace fracgs {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NonpositiveT: return "NonpositiveT";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NonpositiveProfile: return "NonpositiveProfile";
    case ErrorKind::InconsistentEstimate: return "InconsistentEstimate";
    case ErrorKind::NonConverged: return "NonConverged";
    case ErrorKind::ExponentDegenerate: return "ExponentDegenerate";
    case ErrorKind::NonpositiveA: return "NonpositiveA";
    case ErrorKind::NoInteriorMinimum: return "NoInteriorMinimum";
    case ErrorKind::ZeroPair: return "ZeroPair";
    case ErrorKind::NotSuperThreshold: return "NotSuperThreshold";
    case ErrorKind::ScaleClash: return "ScaleClash";
    case ErrorKind::NonMonotoneVerdicts: return "NonMonotoneVerdicts";
    case ErrorKind::AllSeedsDiverged: return "AllSeedsDiverged";
    case ErrorKind::SymmetryBroken: return "SymmetryBroken";
    case ErrorKind::ConfigParse: return "ConfigParse";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace fracgs
