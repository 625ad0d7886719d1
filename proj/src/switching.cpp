#include "bloch/switching.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bloch/errors.hpp"
#include "bloch/unbounded.hpp"

namespace bloch {
namespace {

constexpr double kPi = std::numbers::pi;

void check_bound(double m) {
  if (!(m > 0.5)) {
    throw Error(ErrorCode::BoundTooSmall,
                "control bound must satisfy m > 1/2, got " + std::to_string(m));
  }
  if (!std::isfinite(m)) {
    throw Error(ErrorCode::InvalidArgument, "switching geometry needs a finite control bound");
  }
}

// Continuous branch of acot((2m cot(theta) - 1) / sqrt(4m^2 - 1)) on [0, pi].
double saturated_phase(double theta, double m, double root) {
  const double s = std::sin(theta);
  return std::atan2(root * s, 2.0 * m * std::cos(theta) - s);
}

}  // namespace

double acot(double x) noexcept { return kPi / 2 - std::atan(x); }

SwitchAngles switching_angles(double kappa, double m) {
  check_bound(m);
  double disc = kappa * kappa - m * m + 1.0;
  if (disc < 0.0) {
    if (disc < -1e-12 * m * m) {
      throw Error(ErrorCode::NoRealSwitch,
                  "no saturation for kappa = " + std::to_string(kappa) +
                      " below sqrt(m^2 - 1) = " + std::to_string(std::sqrt(m * m - 1.0)));
    }
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  return {acot((1.0 + root) / m), acot((1.0 - root) / m)};
}

double first_switch_limit(double m) {
  check_bound(m);
  if (m >= 1.0) return acot(1.0 / m);
  return acot((1.0 + std::sqrt(1.0 - m * m)) / m);
}

double second_switch_limit(double m) {
  check_bound(m);
  if (m >= 1.0) return acot(1.0 / m);
  return acot((1.0 - std::sqrt(1.0 - m * m)) / m);
}

double kappa_from_switch(double theta, double m, SwitchSlot slot) {
  check_bound(m);
  constexpr double slack = 1e-12;
  if (slot == SwitchSlot::First) {
    if (!(theta > 0.0 && theta <= first_switch_limit(m) + slack)) {
      throw Error(ErrorCode::AngleOutOfRange,
                  "first switch angle " + std::to_string(theta) + " outside (0, " +
                      std::to_string(first_switch_limit(m)) + "]");
    }
  } else if (!(theta >= second_switch_limit(m) - slack && theta < kPi)) {
    throw Error(ErrorCode::AngleOutOfRange,
                "second switch angle " + std::to_string(theta) + " outside [" +
                    std::to_string(second_switch_limit(m)) + ", pi)");
  }
  const double shift = m * std::cos(theta) / std::sin(theta) - 1.0;
  return std::sqrt(std::max(0.0, shift * shift + m * m - 1.0));
}

double partner_angle(double theta, double m) noexcept {
  const double s = std::sin(theta);
  return std::atan2(s, 2.0 / m * s - std::cos(theta));
}

double first_switch_radius(double theta1, double m) {
  check_bound(m);
  if (theta1 == 0.0) return 1.0;
  return unbounded_radius(theta1, kappa_from_switch(theta1, m, SwitchSlot::First));
}

double second_switch_radius(double theta2, double m) {
  check_bound(m);
  if (theta2 == kPi) return reachable_boundary(kPi, m);
  const double kappa = kappa_from_switch(theta2, m, SwitchSlot::Second);
  const double theta1 = partner_angle(theta2, m);
  return saturated_arc_radius(unbounded_radius(theta1, kappa), theta1, theta2, m);
}

double saturated_arc_radius(double r_start, double theta_start, double theta_end, double m) {
  check_bound(m);
  const double root = std::sqrt(4.0 * m * m - 1.0);
  const double ratio = (2.0 * m - std::sin(2.0 * theta_start)) / (2.0 * m - std::sin(2.0 * theta_end));
  const double phase = saturated_phase(theta_end, m, root) - saturated_phase(theta_start, m, root);
  return r_start * std::sqrt(ratio) * std::exp(-phase / root);
}

double reachable_boundary(double theta, double m) { return saturated_arc_radius(1.0, 0.0, theta, m); }

Landmarks landmarks(double m) {
  check_bound(m);
  const double root = std::sqrt(4.0 * m * m - 1.0);
  Landmarks out;
  out.m = m;
  out.r_c1 = std::exp(-kPi / root);
  out.r_d1 = std::exp(-(kPi - acot(1.0 / root)) / root);
  out.r_d2 = std::sqrt(m * m + 2.0) / (1.0 + std::sqrt(m * m + 1.0)) *
             std::exp(-acot((m * m - 1.0) / root) / root);
  if (m >= 1.0) {
    out.theta_b = acot(1.0 / m);
    out.r_b = std::sqrt(m * m + 1.0) / (m + 1.0);
    out.r_c2 = (m - 1.0) / (m + 1.0);
    out.r_d3 = std::sqrt(m * m - 1.0) / (m + 1.0);
  } else {
    const double s = std::sqrt(1.0 - m * m);
    out.theta_b1 = acot((1.0 + s) / m);
    out.theta_b2 = acot((1.0 - s) / m);
    out.r_b1 = std::sqrt((1.0 + s) / 2.0);
    out.r_b2 = *out.r_b1 * std::exp(-acot((2.0 * m * m - 1.0) / (root * s)) / root);
  }
  return out;
}

double noswitch_max_radius(double theta, double m) {
  check_bound(m);
  const double c = std::cos(theta);
  if (m >= 1.0) return (c + std::sqrt(c * c + m * m - 1.0)) / (m + 1.0);
  const Landmarks marks = landmarks(m);
  return *marks.r_b2 * c / std::cos(*marks.theta_b2);
}

SwitchingGeometry switching_geometry(double m, std::size_t samples) {
  check_bound(m);
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least two curve samples");
  SwitchingGeometry out;
  out.m = m;
  out.marks = landmarks(m);
  const auto spread = [&](double lo, double hi, std::size_t i) {
    if (i + 1 == samples) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
  };

  const double first_hi = first_switch_limit(m);
  out.first_curve.reserve(samples);
  out.second_curve.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double theta1 = spread(0.0, first_hi, i);
    const double r1 = first_switch_radius(theta1, m);
    const double theta2 = partner_angle(theta1, m);
    out.first_curve.push_back({theta1, r1});
    out.second_curve.push_back({theta2, saturated_arc_radius(r1, theta1, theta2, m)});
  }

  out.reachable_boundary.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double theta = spread(0.0, kPi, i);
    out.reachable_boundary.push_back({theta, reachable_boundary(theta, m)});
  }

  const double ns_lo = second_switch_limit(m);
  const double ns_hi = m >= 1.0 ? kPi : kPi / 2;
  out.noswitch_max.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double theta = spread(ns_lo, ns_hi, i);
    out.noswitch_max.push_back({theta, noswitch_max_radius(theta, m)});
  }
  return out;
}

}  // namespace bloch
