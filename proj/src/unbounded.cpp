#include "bloch/unbounded.hpp"

#include <cmath>

#include "bloch/core.hpp"
#include "bloch/errors.hpp"

namespace bloch {

double kappa_for_target(const PulseTarget& target) {
  validate_target(target);
  const double r = target.radius;
  if (target.axis == TargetAxis::HalfPi) return 2.0 * r / (1.0 - r * r);
  return 2.0 * std::sqrt(r) / (1.0 - r);
}

double unbounded_control(double theta, double kappa) noexcept {
  const double c = std::cos(theta);
  return std::sin(theta) * (c + std::sqrt(c * c + kappa * kappa));
}

double unbounded_thetadot(double theta, double kappa) noexcept {
  const double c = std::cos(theta);
  return std::sin(theta) * std::sqrt(c * c + kappa * kappa);
}

double unbounded_radius(double theta, double kappa) noexcept {
  const double c = std::cos(theta);
  return (c + std::sqrt(c * c + kappa * kappa)) / (1.0 + std::sqrt(1.0 + kappa * kappa));
}

double closed_energy(const PulseTarget& target) {
  validate_target(target);
  const double r = target.radius;
  if (target.axis == TargetAxis::HalfPi) return 1.0 / (1.0 - r * r);
  return (1.0 + r) / (1.0 - r);
}

UnboundedSolution solve_unbounded(const PulseTarget& target) {
  UnboundedSolution out;
  out.target = target;
  out.kappa = kappa_for_target(target);
  out.energy = closed_energy(target);
  return out;
}

}  // namespace bloch
