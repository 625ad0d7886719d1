#include "bloch/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "bloch/errors.hpp"

namespace bloch {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
Vec<N> axpy(const Vec<N>& x, double h, const Vec<N>& k) {
  Vec<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = x[i] + h * k[i];
  return out;
}

template <std::size_t N, class Rhs>
Vec<N> rk4_step(const Rhs& rhs, const Vec<N>& s, double h) {
  const Vec<N> k1 = rhs(s);
  const Vec<N> k2 = rhs(axpy(s, 0.5 * h, k1));
  const Vec<N> k3 = rhs(axpy(s, 0.5 * h, k2));
  const Vec<N> k4 = rhs(axpy(s, h, k3));
  Vec<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

// Fixed-step RK4 that lands exactly on each stop angle. `emit(t, s)` is called
// for the start state and after every accepted step.
template <std::size_t N, class Rhs, class Angle, class Rate, class Emit>
void march(Vec<N> s, const Rhs& rhs, const Angle& angle, const Rate& thetadot,
           std::vector<double> stops, const StepControl& control, const Emit& emit) {
  const double h = control.step;
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::StepTooLarge, "integration step must be positive and finite");
  }
  double t = 0.0;
  std::size_t steps = 0;
  emit(t, s);
  if (!(thetadot(s) > 0.0)) {
    throw Error(ErrorCode::StallDetected,
                "theta does not increase at the start angle " + std::to_string(angle(s)));
  }
  for (double stop : stops) {
    if (angle(s) >= stop) continue;
    while (true) {
      if (++steps > control.max_steps) {
        throw Error(ErrorCode::StallDetected,
                    "step budget exhausted at theta = " + std::to_string(angle(s)));
      }
      Vec<N> next = rk4_step(rhs, s, h);
      double dt = h;
      const bool crossed = angle(next) >= stop;
      if (crossed) {
        double lo = 0.0;
        double hi = h;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * h; ++it) {
          const double mid = 0.5 * (lo + hi);
          (angle(rk4_step(rhs, s, mid)) >= stop ? hi : lo) = mid;
        }
        dt = hi;
        next = rk4_step(rhs, s, dt);
      }
      const double t_next = t + dt;
      if (!(t_next > t)) {
        throw Error(ErrorCode::StepTooLarge, "time stopped increasing at t = " + std::to_string(t));
      }
      s = next;
      t = t_next;
      emit(t, s);
      if (crossed) break;
      if (!(thetadot(s) > 0.0)) {
        throw Error(ErrorCode::StallDetected,
                    "theta stopped increasing at theta = " + std::to_string(angle(s)));
      }
    }
  }
}

std::vector<double> stop_angles(const FeedbackLaw& law, double theta_start, double final_stop,
                                const StepControl& control) {
  std::vector<double> stops;
  if (control.locate_breakpoints) {
    for (double b : law.breakpoints) {
      if (b > theta_start && b < final_stop) stops.push_back(b);
    }
    std::sort(stops.begin(), stops.end());
  }
  stops.push_back(final_stop);
  return stops;
}

}  // namespace

double CartesianState::radius() const noexcept { return std::sqrt(x * x + y * y + z * z); }

double PolarState::radius() const noexcept { return std::exp(a); }

SphericalCoords polar_from_cartesian(const CartesianState& s) {
  const double r = s.radius();
  if (!(r > 0.0)) throw Error(ErrorCode::ZeroVector, "polar coordinates of the zero vector");
  const double rho = std::hypot(s.x, s.y);
  SphericalCoords out;
  out.a = std::log(r);
  out.theta = std::atan2(rho, s.z);
  out.phi = rho > 0.0 ? std::atan2(s.y, s.x) : kPoleAzimuth;
  return out;
}

CartesianState cartesian_from_polar(double a, double theta, double phi) {
  const double r = std::exp(a);
  const double rho = r * std::sin(theta);
  return {rho * std::cos(phi), rho * std::sin(phi), r * std::cos(theta)};
}

ReducedRate reduced_rhs(double theta, double u) noexcept {
  const double s = std::sin(theta);
  return {-s * s, u - s * std::cos(theta)};
}

CartesianState full_rhs(const CartesianState& s, double ux, double uy) noexcept {
  return {-s.x - uy * s.z, -s.y + ux * s.z, uy * s.x - ux * s.y};
}

double hamiltonian(double u, double theta, double lambda_theta, double lambda_a) noexcept {
  const double s = std::sin(theta);
  return -0.5 * u * u + lambda_theta * (u - s * std::cos(theta)) - lambda_a * s * s;
}

Trajectory integrate_feedback(const FeedbackLaw& law, PolarState start, double theta_stop,
                              const StepControl& control) {
  if (!law.control) throw Error(ErrorCode::InvalidArgument, "feedback law has no control");
  const double final_stop = theta_stop - control.stop_tolerance;
  if (!(final_stop > start.theta)) {
    throw Error(ErrorCode::InvalidArgument, "stop angle must exceed the start angle");
  }
  // (a, theta, accumulated energy)
  const auto rhs = [&](const Vec<3>& s) {
    const double u = law.control(s[1]);
    const ReducedRate r = reduced_rhs(s[1], u);
    return Vec<3>{r.da_dt, r.dtheta_dt, 0.5 * u * u};
  };
  const auto angle = [](const Vec<3>& s) { return s[1]; };
  const auto rate = [&](const Vec<3>& s) { return reduced_rhs(s[1], law.control(s[1])).dtheta_dt; };

  Trajectory out;
  out.samples.reserve(static_cast<std::size_t>(8.0 / control.step) + 16);
  const auto emit = [&](double t, const Vec<3>& s) {
    TrajectorySample sample;
    sample.t = t;
    sample.state = {s[0], s[1]};
    sample.u = law.control(s[1]);
    if (law.costate) {
      sample.lambda_theta = law.costate(s[1]);
      sample.hamiltonian = hamiltonian(sample.u, s[1], sample.lambda_theta, law.lambda_a);
    } else {
      sample.lambda_theta = kNaN;
      sample.hamiltonian = kNaN;
    }
    out.samples.push_back(sample);
    out.energy = s[2];
  };
  march(Vec<3>{start.a, start.theta, 0.0}, rhs, angle, rate,
        stop_angles(law, start.theta, final_stop, control), control, emit);
  return out;
}

std::vector<CartesianSample> integrate_full_feedback(const FeedbackLaw& law,
                                                     CartesianState start, double theta_stop,
                                                     const StepControl& control) {
  if (!law.control) throw Error(ErrorCode::InvalidArgument, "feedback law has no control");
  const auto theta_of = [](const Vec<3>& s) { return std::atan2(std::hypot(s[0], s[1]), s[2]); };
  const double theta_start = theta_of({start.x, start.y, start.z});
  const double final_stop = theta_stop - control.stop_tolerance;
  if (!(final_stop > theta_start)) {
    throw Error(ErrorCode::InvalidArgument, "stop angle must exceed the start angle");
  }
  const auto rhs = [&](const Vec<3>& s) {
    const double u = law.control(theta_of(s));
    const CartesianState d = full_rhs({s[0], s[1], s[2]}, u, 0.0);
    return Vec<3>{d.x, d.y, d.z};
  };
  const auto rate = [&](const Vec<3>& s) {
    const double th = theta_of(s);
    return reduced_rhs(th, law.control(th)).dtheta_dt;
  };
  std::vector<CartesianSample> out;
  const auto emit = [&](double t, const Vec<3>& s) {
    out.push_back({t, {s[0], s[1], s[2]}});
  };
  march(Vec<3>{start.x, start.y, start.z}, rhs, theta_of, rate,
        stop_angles(law, theta_start, final_stop, control), control, emit);
  return out;
}

double energy_theta_quadrature(const std::function<double(double)>& u_of_theta,
                               const std::function<double(double)>& thetadot_of_theta,
                               double theta_lo, double theta_hi, double rel_tol) {
  if (!(theta_hi >= theta_lo)) {
    throw Error(ErrorCode::InvalidArgument, "quadrature interval is reversed");
  }
  if (theta_hi == theta_lo) return 0.0;

  // Composite Simpson on n panels; endpoint singularities are replaced by
  // quadratic extrapolation from the three nearest interior nodes.
  const auto simpson = [&](std::size_t n) {
    const double h = (theta_hi - theta_lo) / static_cast<double>(n);
    std::vector<double> f(n + 1);
    std::vector<bool> missing(n + 1, false);
    for (std::size_t i = 0; i <= n; ++i) {
      const double th = i == n ? theta_hi : theta_lo + h * static_cast<double>(i);
      const double rate = thetadot_of_theta(th);
      if (rate > 0.0) {
        const double u = u_of_theta(th);
        f[i] = 0.5 * u * u / rate;
      } else if (i == 0 || i == n) {
        missing[i] = true;
      } else {
        throw Error(ErrorCode::NonpositiveThetaDot,
                    "thetadot <= 0 at interior angle " + std::to_string(th));
      }
    }
    if (missing[0]) f[0] = 3.0 * f[1] - 3.0 * f[2] + f[3];
    if (missing[n]) f[n] = 3.0 * f[n - 1] - 3.0 * f[n - 2] + f[n - 3];
    double sum = f[0] + f[n];
    for (std::size_t i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return sum * h / 3.0;
  };

  std::size_t n = 64;
  double previous = simpson(n);
  while (true) {
    n *= 2;
    const double current = simpson(n);
    const double change = std::abs(current - previous);
    if (change <= rel_tol * std::abs(current) || change < 1e-300 || n >= (std::size_t{1} << 22)) {
      return std::max(0.0, current + (current - previous) / 15.0);
    }
    previous = current;
  }
}

}  // namespace bloch
