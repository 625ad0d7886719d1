#pragma once

// Geometry of the bounded problem |u| <= m: where the smooth feedback law
// saturates, the switching curves traced by those points, and the named
// landmark radii that separate the switching regimes.

#include <cstddef>
#include <optional>
#include <vector>

namespace bloch {

// Inverse cotangent with range [0, pi].
double acot(double x) noexcept;

struct SwitchAngles {
  double first = 0.0;
  double second = 0.0;
};

// Roots of the saturation condition u(theta) = m for a given kappa.
// Throws BoundTooSmall for m <= 1/2 and NoRealSwitch when m >= 1 and
// kappa < sqrt(m^2 - 1).
SwitchAngles switching_angles(double kappa, double m);

enum class SwitchSlot { First, Second };

// kappa that places a switch at `theta` in the given slot.
// Throws AngleOutOfRange outside that slot's range.
double kappa_from_switch(double theta, double m, SwitchSlot slot);

// The other root: cot(theta) + cot(partner) = 2 / m. An involution on [0, pi].
double partner_angle(double theta, double m) noexcept;

// Upper end of the first-switch range: theta_B (m >= 1) or theta_B1.
double first_switch_limit(double m);
// Lower end of the second-switch range: theta_B (m >= 1) or theta_B2.
double second_switch_limit(double m);

// Radius of the first switching curve at theta1 (smooth arc from (1, 0)).
double first_switch_radius(double theta1, double m);

// Radius of the second switching curve at theta2, computed from the
// second-slot kappa and the saturated transport from the partner angle.
double second_switch_radius(double theta2, double m);

// Radius after riding u = m from (r_start, theta_start) to theta_end.
double saturated_arc_radius(double r_start, double theta_start, double theta_end, double m);

// The u = m trajectory from (1, 0); bounds the reachable set.
double reachable_boundary(double theta, double m);

struct Landmarks {
  double m = 0.0;
  double r_c1 = 0.0;  // largest reachable radius on theta = pi
  double r_d1 = 0.0;  // largest reachable radius on theta = pi/2
  double r_d2 = 0.0;  // second switching curve crossing theta = pi/2

  // m >= 1
  std::optional<double> theta_b;
  std::optional<double> r_b;
  std::optional<double> r_c2;  // largest no-switch radius on theta = pi
  std::optional<double> r_d3;  // largest no-switch radius on theta = pi/2

  // 1/2 < m < 1
  std::optional<double> theta_b1;
  std::optional<double> theta_b2;
  std::optional<double> r_b1;
  std::optional<double> r_b2;
};

// Throws BoundTooSmall for m <= 1/2.
Landmarks landmarks(double m);

// Radius at theta along the largest no-switch trajectory: kappa = sqrt(m^2 - 1)
// for m >= 1 on [theta_B, pi], and the kappa = 0 arc from B2 for m < 1.
double noswitch_max_radius(double theta, double m);

struct CurvePoint {
  double theta = 0.0;
  double r = 0.0;
};

struct SwitchingGeometry {
  double m = 0.0;
  std::vector<CurvePoint> first_curve;
  std::vector<CurvePoint> second_curve;  // second_curve[i] is the partner of first_curve[i]
  std::vector<CurvePoint> reachable_boundary;
  std::vector<CurvePoint> noswitch_max;
  Landmarks marks;
};

SwitchingGeometry switching_geometry(double m, std::size_t samples);

}  // namespace bloch
