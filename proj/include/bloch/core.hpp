#pragma once

// Bloch dynamics with transverse relaxation only, in time units rescaled by
// the relaxation rate. The reduced model tracks a = ln r and the polar angle
// theta of the magnetization in the plane of rotation (azimuth fixed).

#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace bloch {

inline constexpr double kPoleAzimuth = std::numbers::pi / 2;

// Closed-loop simulations start slightly off the north pole; theta = 0 is an
// equilibrium of every synthesized law.
inline constexpr double kStartAngle = 1e-6;

struct CartesianState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double radius() const noexcept;
};

struct PolarState {
  double a = 0.0;      // ln r, never positive along a trajectory from (1, 0)
  double theta = 0.0;  // angle from +z, in [0, pi]

  double radius() const noexcept;
};

struct SphericalCoords {
  double a = 0.0;
  double theta = 0.0;
  double phi = kPoleAzimuth;
};

// Throws ZeroVector for the origin. At the poles phi = kPoleAzimuth.
SphericalCoords polar_from_cartesian(const CartesianState& s);
CartesianState cartesian_from_polar(double a, double theta, double phi = kPoleAzimuth);

struct ReducedRate {
  double da_dt = 0.0;
  double dtheta_dt = 0.0;
};

ReducedRate reduced_rhs(double theta, double u) noexcept;

// Time derivative of (x, y, z) with the relaxation rate scaled to one.
CartesianState full_rhs(const CartesianState& s, double ux, double uy) noexcept;

double hamiltonian(double u, double theta, double lambda_theta, double lambda_a) noexcept;

// A control law expressed as feedback on theta. `costate`, when set, supplies
// lambda_theta(theta) so trajectories can record the Hamiltonian.
struct FeedbackLaw {
  std::function<double(double)> control;
  std::function<double(double)> costate;
  double lambda_a = 0.0;
  std::vector<double> breakpoints;  // angles where the law changes form
};

struct StepControl {
  double step = 1e-4;
  double stop_tolerance = 1e-6;  // stop once theta >= theta_stop - stop_tolerance
  std::size_t max_steps = 20'000'000;
  bool locate_breakpoints = true;  // land a step exactly on each breakpoint
};

struct TrajectorySample {
  double t = 0.0;
  PolarState state;
  double u = 0.0;
  double lambda_theta = 0.0;  // NaN when the law has no costate
  double hamiltonian = 0.0;   // NaN when the law has no costate
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double energy = 0.0;  // time-accumulated integral of u^2 / 2

  const TrajectorySample& back() const { return samples.back(); }
};

// Fixed-step RK4 on the reduced system closed by `law`. Throws StallDetected
// if theta stops increasing before the stop angle and StepTooLarge on
// non-positive steps.
Trajectory integrate_feedback(const FeedbackLaw& law, PolarState start, double theta_stop,
                              const StepControl& control = {});

struct CartesianSample {
  double t = 0.0;
  CartesianState state;
};

// Same closed loop integrated on the three-dimensional model with u_x = u(theta)
// and u_y = 0, so the motion stays in the yz-plane.
std::vector<CartesianSample> integrate_full_feedback(const FeedbackLaw& law,
                                                     CartesianState start, double theta_stop,
                                                     const StepControl& control = {});

// Energy as an integral over theta of u^2 / (2 thetadot). Endpoints where
// thetadot vanishes are replaced by their extrapolated limit; an interior
// node with thetadot <= 0 throws NonpositiveThetaDot.
double energy_theta_quadrature(const std::function<double(double)>& u_of_theta,
                               const std::function<double(double)>& thetadot_of_theta,
                               double theta_lo, double theta_hi, double rel_tol = 1e-11);

}  // namespace bloch
