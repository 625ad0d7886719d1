#pragma once

#include "bloch/target.hpp"

namespace bloch {

// Closed-form minimum-energy pulses when the control amplitude is free.
// kappa >= 0 parameterizes the constant costate lambda_a = kappa^2 / 2.

struct UnboundedSolution {
  double kappa = 0.0;
  PulseTarget target;
  double energy = 0.0;
};

double kappa_for_target(const PulseTarget& target);

// u(theta) = sin(theta) (cos(theta) + sqrt(cos^2(theta) + kappa^2))
double unbounded_control(double theta, double kappa) noexcept;
double unbounded_thetadot(double theta, double kappa) noexcept;
// Radius reached at theta along the smooth arc started at (1, 0).
double unbounded_radius(double theta, double kappa) noexcept;

double closed_energy(const PulseTarget& target);

UnboundedSolution solve_unbounded(const PulseTarget& target);

}  // namespace bloch
