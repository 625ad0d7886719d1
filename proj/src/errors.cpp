#include "bloch/errors.hpp"

#include <string>

#include "bloch/target.hpp"

namespace bloch {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::StallDetected: return "StallDetected";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NonpositiveThetaDot: return "NonpositiveThetaDot";
    case ErrorCode::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorCode::NoRealSwitch: return "NoRealSwitch";
    case ErrorCode::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorCode::DegenerateKappa: return "DegenerateKappa";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::BoundTooSmall: return "BoundTooSmall";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::DidNotConverge: return "DidNotConverge";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

void validate_target(const PulseTarget& target) {
  if (!(target.radius > 0.0 && target.radius < 1.0)) {
    throw Error(ErrorCode::TargetOutOfRange,
                "final radius must lie in (0, 1), got " + std::to_string(target.radius));
  }
}

const char* to_string(TargetAxis axis) noexcept {
  return axis == TargetAxis::Pi ? "pi" : "pi/2";
}

}  // namespace bloch
