#include "bloch/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bloch/errors.hpp"
#include "bloch/switching.hpp"
#include "bloch/unbounded.hpp"

namespace bloch {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double guarded(const std::function<double(double)>& f, double theta) {
  try {
    const double v = f(theta);
    return std::isfinite(v) ? v : kNaN;
  } catch (const Error&) {
    return kNaN;
  }
}

// Samples `f` on a uniform grid over [lo, hi], brackets every sign change and
// bisects each to the requested angle tolerance. Endpoints where `f` is not
// defined are nudged inward.
std::vector<double> bracket_roots(const std::function<double(double)>& f, double lo, double hi,
                                  const RootSearch& search) {
  const std::size_t n = std::max<std::size_t>(search.samples, 2);
  std::vector<double> theta(n + 1);
  std::vector<double> value(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    theta[i] = i == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    value[i] = guarded(f, theta[i]);
  }
  const double nudge = 1e-9 * (hi - lo);
  if (std::isnan(value[0])) {
    theta[0] = lo + nudge;
    value[0] = guarded(f, theta[0]);
  }
  if (std::isnan(value[n])) {
    theta[n] = hi - nudge;
    value[n] = guarded(f, theta[n]);
  }

  std::vector<double> roots;
  for (std::size_t i = 0; i <= n; ++i) {
    if (value[i] == 0.0) {
      roots.push_back(theta[i]);
      continue;
    }
    if (i == n || std::isnan(value[i]) || std::isnan(value[i + 1]) || value[i + 1] == 0.0) continue;
    if ((value[i] < 0.0) == (value[i + 1] < 0.0)) continue;
    double a = theta[i];
    double b = theta[i + 1];
    const bool a_negative = value[i] < 0.0;
    while (b - a > search.angle_tolerance) {
      const double mid = 0.5 * (a + b);
      const double fm = guarded(f, mid);
      if (std::isnan(fm)) break;
      if (fm == 0.0) {
        a = b = mid;
        break;
      }
      ((fm < 0.0) == a_negative ? a : b) = mid;
    }
    roots.push_back(0.5 * (a + b));
  }
  return roots;
}

PulseProgram pick_cheapest(std::vector<PulseProgram> candidates, const char* what) {
  auto best = std::min_element(candidates.begin(), candidates.end(),
                               [](const auto& x, const auto& y) { return x.energy < y.energy; });
  PulseProgram out = *best;
  if (candidates.size() > 1) {
    std::ostringstream msg;
    msg << candidates.size() << " " << what << " crossings found; kept the lowest-energy one (E = "
        << out.energy << ")";
    out.diagnostics.push_back(msg.str());
  }
  return out;
}

void check_finite_bound(double m) {
  if (!(m > 0.5)) {
    throw Error(ErrorCode::BoundTooSmall,
                "control bound must satisfy m > 1/2, got " + std::to_string(m));
  }
  if (!std::isfinite(m)) {
    throw Error(ErrorCode::InvalidArgument, "bounded synthesis needs a finite control bound");
  }
}

}  // namespace

Regime classify(double m, const PulseTarget& target) {
  validate_target(target);
  if (!(m > 0.5)) {
    throw Error(ErrorCode::BoundTooSmall,
                "control bound must satisfy m > 1/2, got " + std::to_string(m));
  }
  if (std::isinf(m)) return Regime::NoSwitch;
  const Landmarks marks = landmarks(m);
  const double r = target.radius;
  if (target.axis == TargetAxis::Pi) {
    if (r > marks.r_c1) return Regime::Unreachable;
    if (marks.r_c2 && r <= *marks.r_c2) return Regime::NoSwitch;
    return Regime::TwoSwitch;
  }
  if (r > marks.r_d1) return Regime::Unreachable;
  if (r > marks.r_d2) return Regime::OneSwitch;
  if (marks.r_d3 && r <= *marks.r_d3) return Regime::NoSwitch;
  return Regime::TwoSwitch;
}

double max_reachable_radius(double m, TargetAxis axis) {
  if (!(m > 0.5)) throw Error(ErrorCode::BoundTooSmall, "control bound must satisfy m > 1/2");
  if (std::isinf(m)) return 1.0;
  const Landmarks marks = landmarks(m);
  return axis == TargetAxis::Pi ? marks.r_c1 : marks.r_d1;
}

double required_second_switch_radius(double theta2, const PulseTarget& target, double kappa) {
  const double c = std::cos(theta2);
  const double numerator = target.radius * (c + std::sqrt(c * c + kappa * kappa));
  // -1 + sqrt(1 + kappa^2), written without cancellation
  const double denominator = target.axis == TargetAxis::Pi
                                 ? kappa * kappa / (1.0 + std::sqrt(1.0 + kappa * kappa))
                                 : kappa;
  if (!(denominator > 0.0)) {
    throw Error(ErrorCode::DegenerateKappa, "final smooth arc is degenerate at kappa = 0");
  }
  return numerator / denominator;
}

double required_first_switch_radius(double theta1, double r_tau, double m) {
  check_finite_bound(m);
  const double root = std::sqrt(4.0 * m * m - 1.0);
  const auto phase = [&](double th) {
    const double s = std::sin(th);
    return std::atan2(root * s, 2.0 * m * std::cos(th) - s);
  };
  const double f = phase(kPi / 2) - phase(theta1);
  return r_tau * std::sqrt(2.0 * m / (2.0 * m - std::sin(2.0 * theta1))) * std::exp(f / root);
}

PulseProgram solve_two_switch(double m, const PulseTarget& target, const RootSearch& search) {
  check_finite_bound(m);
  validate_target(target);
  const double lo = second_switch_limit(m);
  const double hi = target.angle();
  if (!(hi > lo)) {
    throw Error(ErrorCode::NoBracket, "second-switch interval is empty for this target");
  }
  const auto mismatch = [&](double theta2) {
    const double kappa = kappa_from_switch(theta2, m, SwitchSlot::Second);
    return second_switch_radius(theta2, m) - required_second_switch_radius(theta2, target, kappa);
  };
  const std::vector<double> roots = bracket_roots(mismatch, lo, hi, search);
  std::vector<PulseProgram> candidates;
  for (double theta2 : roots) {
    const double kappa = kappa_from_switch(theta2, m, SwitchSlot::Second);
    const double theta1 = partner_angle(theta2, m);
    candidates.push_back(assemble_program(m, target, Regime::TwoSwitch, kappa, theta1, theta2));
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::NoBracket, "the required second-switch radius never meets the second "
                                      "switching curve on [" + std::to_string(lo) + ", " +
                                      std::to_string(hi) + "]");
  }
  return pick_cheapest(std::move(candidates), "second-switch");
}

PulseProgram solve_one_switch(double m, double r_tau, const RootSearch& search) {
  check_finite_bound(m);
  const PulseTarget target{r_tau, TargetAxis::HalfPi};
  validate_target(target);
  const double hi = first_switch_limit(m);
  const auto mismatch = [&](double theta1) {
    return first_switch_radius(theta1, m) - required_first_switch_radius(theta1, r_tau, m);
  };
  std::vector<PulseProgram> candidates;
  std::vector<std::string> rejected;
  for (double theta1 : bracket_roots(mismatch, 0.0, hi, search)) {
    // The saturated arc may not meet the second switching curve before pi/2.
    if (partner_angle(theta1, m) < kPi / 2 - 1e-12) {
      rejected.push_back("rejected first-switch crossing at theta1 = " + std::to_string(theta1) +
                         ": saturated arc would switch back before pi/2");
      continue;
    }
    theta1 = std::max(theta1, search.angle_tolerance);
    const double kappa = kappa_from_switch(theta1, m, SwitchSlot::First);
    candidates.push_back(assemble_program(m, target, Regime::OneSwitch, kappa, theta1, std::nullopt));
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::NoBracket,
                "the required first-switch radius never meets the first switching curve");
  }
  PulseProgram out = pick_cheapest(std::move(candidates), "first-switch");
  out.diagnostics.insert(out.diagnostics.end(), rejected.begin(), rejected.end());
  return out;
}

PulseProgram synthesize(double m, const PulseTarget& target, const RootSearch& search) {
  const Regime regime = classify(m, target);
  switch (regime) {
    case Regime::Unreachable: {
      const double limit = max_reachable_radius(m, target.axis);
      std::ostringstream msg;
      msg.precision(12);
      msg << "final radius " << target.radius << " on theta = " << to_string(target.axis)
          << " is outside the reachable set; largest reachable radius is " << limit;
      throw UnreachableError(limit, msg.str());
    }
    case Regime::NoSwitch:
      return assemble_program(m, target, Regime::NoSwitch, kappa_for_target(target), std::nullopt,
                              std::nullopt);
    case Regime::OneSwitch:
      return solve_one_switch(m, target.radius, search);
    case Regime::TwoSwitch:
      return solve_two_switch(m, target, search);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown regime");
}

}  // namespace bloch
