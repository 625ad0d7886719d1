#pragma once

#include <stdexcept>
#include <string>

namespace bloch {

enum class ErrorCode {
  InvalidArgument,
  ZeroVector,
  StallDetected,
  StepTooLarge,
  NonpositiveThetaDot,
  TargetOutOfRange,
  NoRealSwitch,
  AngleOutOfRange,
  DegenerateKappa,
  NoBracket,
  BoundTooSmall,
  Unreachable,
  DidNotConverge,
  ParseError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown when the requested final radius lies outside the reachable set.
// Carries the largest radius reachable on the requested axis.
class UnreachableError : public Error {
 public:
  UnreachableError(double limit_radius, const std::string& what)
      : Error(ErrorCode::Unreachable, what), limit_radius_(limit_radius) {}

  double limit_radius() const noexcept { return limit_radius_; }

 private:
  double limit_radius_;
};

}  // namespace bloch
