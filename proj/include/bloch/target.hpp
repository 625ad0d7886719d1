#pragma once

#include <numbers>

namespace bloch {

// Only rotations onto the two axes are analyzed: theta = pi/2 and theta = pi.
enum class TargetAxis { HalfPi, Pi };

struct PulseTarget {
  double radius = 0.0;  // r_tau in (0, 1)
  TargetAxis axis = TargetAxis::Pi;

  constexpr double angle() const noexcept {
    return axis == TargetAxis::Pi ? std::numbers::pi : std::numbers::pi / 2;
  }
};

// Throws TargetOutOfRange unless 0 < radius < 1.
void validate_target(const PulseTarget& target);

const char* to_string(TargetAxis axis) noexcept;

}  // namespace bloch
