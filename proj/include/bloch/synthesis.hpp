#pragma once

#include <cstddef>

#include "bloch/program.hpp"
#include "bloch/target.hpp"

namespace bloch {

// Throws BoundTooSmall for m <= 1/2, TargetOutOfRange for r_tau outside (0, 1).
// A radius equal to a landmark goes to the regime with fewer switches.
Regime classify(double m, const PulseTarget& target);

// r_C1 for theta = pi, r_D1 for theta = pi/2. Infinite m gives 1.
double max_reachable_radius(double m, TargetAxis axis);

// Radius the second switch must have so the final smooth arc with `kappa`
// ends on the target. Throws DegenerateKappa when the denominator vanishes.
double required_second_switch_radius(double theta2, const PulseTarget& target, double kappa);

// Radius the single switch must have so the saturated arc ends at
// (r_tau, pi/2).
double required_first_switch_radius(double theta1, double r_tau, double m);

struct RootSearch {
  std::size_t samples = 2000;
  double angle_tolerance = 1e-12;
};

// Throw NoBracket when no crossing exists on the admissible interval.
PulseProgram solve_two_switch(double m, const PulseTarget& target, const RootSearch& search = {});
PulseProgram solve_one_switch(double m, double r_tau, const RootSearch& search = {});

// Full dispatch. m = kUnboundedControl selects the closed-form unbounded law.
// Throws UnreachableError (carrying the limit radius) and BoundTooSmall.
PulseProgram synthesize(double m, const PulseTarget& target, const RootSearch& search = {});

}  // namespace bloch
