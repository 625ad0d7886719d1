#include "bloch/program.hpp"

#include <cmath>
#include <memory>

#include "bloch/errors.hpp"
#include "bloch/switching.hpp"
#include "bloch/unbounded.hpp"

namespace bloch {

const char* to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::NoSwitch: return "none";
    case Regime::OneSwitch: return "one";
    case Regime::TwoSwitch: return "two";
    case Regime::Unreachable: return "unreachable";
  }
  return "unknown";
}

const Segment& PulseProgram::segment_at(double theta) const {
  if (segments.empty()) throw Error(ErrorCode::InvalidArgument, "program has no segments");
  for (const Segment& seg : segments) {
    if (theta <= seg.theta_hi) return seg;
  }
  return segments.back();
}

double PulseProgram::control(double theta) const {
  const Segment& seg = segment_at(theta);
  if (seg.kind == Segment::Kind::Saturated) return m;
  return unbounded_control(theta, kappa);
}

double PulseProgram::thetadot(double theta) const {
  return control(theta) - std::sin(theta) * std::cos(theta);
}

double PulseProgram::costate(double theta) const {
  const Segment& seg = segment_at(theta);
  if (seg.kind == Segment::Kind::Smooth) return unbounded_control(theta, kappa);
  const double s = std::sin(theta);
  return (m * m + kappa * kappa * s * s) / (2.0 * (m - s * std::cos(theta)));
}

std::vector<double> PulseProgram::switch_angles() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < segments.size(); ++i) out.push_back(segments[i].theta_lo);
  return out;
}

FeedbackLaw PulseProgram::feedback_law() const {
  auto shared = std::make_shared<const PulseProgram>(*this);
  FeedbackLaw law;
  law.control = [shared](double theta) { return shared->control(theta); };
  law.costate = [shared](double theta) { return shared->costate(theta); };
  law.lambda_a = lambda_a();
  law.breakpoints = switch_angles();
  return law;
}

PulseProgram assemble_program(double m, const PulseTarget& target, Regime regime, double kappa,
                              std::optional<double> theta1, std::optional<double> theta2) {
  validate_target(target);
  if (!(m > 0.5)) throw Error(ErrorCode::BoundTooSmall, "control bound must satisfy m > 1/2");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw Error(ErrorCode::InvalidArgument, "kappa must be finite and non-negative");
  }
  const double end = target.angle();
  PulseProgram out;
  out.m = m;
  out.target = target;
  out.regime = regime;
  out.kappa = kappa;
  out.theta1 = theta1;
  out.theta2 = theta2;

  const auto add = [&](Segment::Kind kind, double lo, double hi) {
    if (hi > lo) out.segments.push_back({kind, lo, hi});
  };
  switch (regime) {
    case Regime::NoSwitch:
      if (theta1 || theta2) {
        throw Error(ErrorCode::InvalidArgument, "a no-switch program has no switch angles");
      }
      add(Segment::Kind::Smooth, 0.0, end);
      break;
    case Regime::OneSwitch:
      if (!theta1 || theta2 || !out.bounded() || !(*theta1 >= 0.0 && *theta1 < end)) {
        throw Error(ErrorCode::InvalidArgument, "a one-switch program needs only theta1 in [0, target)");
      }
      add(Segment::Kind::Smooth, 0.0, *theta1);
      add(Segment::Kind::Saturated, *theta1, end);
      break;
    case Regime::TwoSwitch:
      if (!theta1 || !theta2 || !out.bounded() ||
          !(*theta1 >= 0.0 && *theta1 < *theta2 && *theta2 <= end)) {
        throw Error(ErrorCode::InvalidArgument,
                    "a two-switch program needs 0 <= theta1 < theta2 <= target");
      }
      add(Segment::Kind::Smooth, 0.0, *theta1);
      add(Segment::Kind::Saturated, *theta1, *theta2);
      add(Segment::Kind::Smooth, *theta2, end);
      break;
    case Regime::Unreachable:
      throw Error(ErrorCode::InvalidArgument, "cannot assemble a program for an unreachable target");
  }
  out.energy = program_energy(out);
  return out;
}

double program_energy(const PulseProgram& program) {
  double total = 0.0;
  for (const Segment& seg : program.segments) {
    if (seg.kind == Segment::Kind::Smooth) {
      const double kappa = program.kappa;
      total += energy_theta_quadrature([kappa](double th) { return unbounded_control(th, kappa); },
                                       [kappa](double th) { return unbounded_thetadot(th, kappa); },
                                       seg.theta_lo, seg.theta_hi);
    } else {
      const double m = program.m;
      total += energy_theta_quadrature(
          [m](double) { return m; },
          [m](double th) { return m - std::sin(th) * std::cos(th); }, seg.theta_lo, seg.theta_hi);
    }
  }
  return total;
}

Trajectory simulate_program(const PulseProgram& program, const StepControl& control) {
  StepControl ctl = control;
  // theta = pi/2 is crossed at a finite rate, so the run lands on it exactly.
  if (program.target.axis == TargetAxis::HalfPi) ctl.stop_tolerance = 0.0;
  return integrate_feedback(program.feedback_law(), {0.0, kStartAngle}, program.target.angle(), ctl);
}

}  // namespace bloch
