#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bloch/core.hpp"
#include "bloch/target.hpp"

namespace bloch {

enum class Regime { NoSwitch, OneSwitch, TwoSwitch, Unreachable };

const char* to_string(Regime regime) noexcept;

struct Segment {
  enum class Kind { Smooth, Saturated };
  Kind kind = Kind::Smooth;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
};

inline constexpr double kUnboundedControl = std::numeric_limits<double>::infinity();

// A synthesized feedback pulse. Smooth segments follow the unbounded law with
// `kappa`; saturated segments hold u = m. Segments tile [0, target.angle()].
struct PulseProgram {
  double m = kUnboundedControl;
  PulseTarget target;
  Regime regime = Regime::NoSwitch;
  double kappa = 0.0;
  std::optional<double> theta1;
  std::optional<double> theta2;
  double energy = 0.0;
  std::vector<Segment> segments;
  std::vector<std::string> diagnostics;

  bool bounded() const noexcept { return std::isfinite(m); }
  double lambda_a() const noexcept { return 0.5 * kappa * kappa; }

  const Segment& segment_at(double theta) const;
  double control(double theta) const;
  double thetadot(double theta) const;
  // lambda_theta: the control itself on smooth arcs, the H = 0 multiplier on
  // saturated arcs.
  double costate(double theta) const;
  std::vector<double> switch_angles() const;
  FeedbackLaw feedback_law() const;
};

// Builds the segment list for the given switching structure and evaluates the
// energy by quadrature. Throws InvalidArgument on inconsistent inputs.
PulseProgram assemble_program(double m, const PulseTarget& target, Regime regime, double kappa,
                              std::optional<double> theta1, std::optional<double> theta2);

double program_energy(const PulseProgram& program);

// Closed-loop run from (a, theta) = (0, kStartAngle) up to the target angle.
Trajectory simulate_program(const PulseProgram& program, const StepControl& control = {});

}  // namespace bloch
