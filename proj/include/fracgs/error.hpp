#pragma once

#include <stdexcept>
#include <string>

namespace fracgs {

// Every failure the library reports carries one of these kinds; the CLI maps
// them onto exit codes.
enum class ErrorKind {
  ConstraintViolation,
  GridMismatch,
  NonpositiveT,
  NoConvergence,
  NonpositiveProfile,
  InconsistentEstimate,
  NonConverged,
  ExponentDegenerate,
  NonpositiveA,
  NoInteriorMinimum,
  ZeroPair,
  NotSuperThreshold,
  ScaleClash,
  NonMonotoneVerdicts,
  AllSeedsDiverged,
  SymmetryBroken,
  ConfigParse,
  IoFailure,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fracgs
