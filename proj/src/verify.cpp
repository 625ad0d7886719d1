#include "bloch/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "bloch/errors.hpp"
#include "bloch/synthesis.hpp"
#include "bloch/unbounded.hpp"

namespace bloch {
namespace {

constexpr double kPi = std::numbers::pi;

struct ArcValues {
  double u;
  double lambda;
};

ArcValues arc_values(const PulseProgram& p, Segment::Kind kind, double theta) {
  if (kind == Segment::Kind::Smooth) {
    const double u = unbounded_control(theta, p.kappa);
    return {u, u};
  }
  const double s = std::sin(theta);
  return {p.m, (p.m * p.m + p.kappa * p.kappa * s * s) / (2.0 * (p.m - s * std::cos(theta)))};
}

// Energy of the program restricted to [0, theta_end].
double energy_up_to(const PulseProgram& program, double theta_end) {
  PulseProgram truncated = program;
  truncated.segments.clear();
  for (Segment seg : program.segments) {
    if (seg.theta_lo >= theta_end) break;
    seg.theta_hi = std::min(seg.theta_hi, theta_end);
    truncated.segments.push_back(seg);
  }
  return program_energy(truncated);
}

struct Endpoint {
  double a;
  double theta;
};

Endpoint advance(Endpoint s, double u, double dt, std::size_t substeps) {
  const double h = dt / static_cast<double>(substeps);
  const auto f = [u](double theta) {
    const double sn = std::sin(theta);
    return std::array<double, 2>{-sn * sn, u - sn * std::cos(theta)};
  };
  for (std::size_t k = 0; k < substeps; ++k) {
    const auto k1 = f(s.theta);
    const auto k2 = f(s.theta + 0.5 * h * k1[1]);
    const auto k3 = f(s.theta + 0.5 * h * k2[1]);
    const auto k4 = f(s.theta + h * k3[1]);
    s.a += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    s.theta += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
  }
  return s;
}

// Piecewise-constant transcription with cached segment-start states, so a
// change to u[i] only re-integrates from segment i onward.
class Transcription {
 public:
  Transcription(std::vector<double> u, double horizon, std::size_t substeps, double target_r,
                double target_theta)
      : u_(std::move(u)),
        dt_(horizon / static_cast<double>(u_.size())),
        substeps_(substeps),
        target_r_(target_r),
        target_theta_(target_theta),
        states_(u_.size() + 1) {
    states_[0] = {0.0, 0.0};
    for (std::size_t i = 0; i < u_.size(); ++i) states_[i + 1] = advance(states_[i], u_[i], dt_, substeps_);
    energy_ = 0.0;
    for (double v : u_) energy_ += 0.5 * v * v * dt_;
  }

  const std::vector<double>& controls() const { return u_; }
  double energy() const { return energy_; }
  double endpoint_error() const { return error_of(states_.back()); }

  // Endpoint error if u[i] were replaced by `value`.
  double trial_error(std::size_t i, double value) {
    Endpoint s = advance(states_[i], value, dt_, substeps_);
    for (std::size_t j = i + 1; j < u_.size(); ++j) s = advance(s, u_[j], dt_, substeps_);
    return error_of(s);
  }

  double trial_energy(std::size_t i, double value) const {
    return energy_ + 0.5 * (value * value - u_[i] * u_[i]) * dt_;
  }

  void accept(std::size_t i, double value) {
    energy_ = trial_energy(i, value);
    u_[i] = value;
    for (std::size_t j = i; j < u_.size(); ++j) states_[j + 1] = advance(states_[j], u_[j], dt_, substeps_);
  }

 private:
  double error_of(const Endpoint& s) const {
    return std::hypot(std::exp(s.a) - target_r_, s.theta - target_theta_);
  }

  std::vector<double> u_;
  double dt_;
  std::size_t substeps_;
  double target_r_;
  double target_theta_;
  std::vector<Endpoint> states_;
  double energy_ = 0.0;
};

struct DescentOutcome {
  std::vector<double> controls;
  double energy;
  double error;
  std::size_t evaluations;
};

// Derivative-free coordinate descent on energy + penalty * error^2 with a
// penalty raised tenfold each time the step size collapses.
DescentOutcome coordinate_descent(Transcription problem, double upper, std::size_t budget) {
  std::size_t evaluations = 0;
  double penalty = 1e4;
  const double initial_step =
      0.05 * std::max(1e-3, *std::max_element(problem.controls().begin(), problem.controls().end()));
  const double min_step = 1e-4 * initial_step;
  double step = initial_step;
  const auto objective = [&](double energy, double error) { return energy + penalty * error * error; };
  double best = objective(problem.energy(), problem.endpoint_error());
  double best_error = problem.endpoint_error();
  const std::size_t n = problem.controls().size();

  while (evaluations < budget) {
    bool improved = false;
    for (std::size_t i = 0; i < n && evaluations < budget; ++i) {
      for (double direction : {1.0, -1.0}) {
        if (evaluations >= budget) break;
        const double current = problem.controls()[i];
        const double candidate = std::clamp(current + direction * step, 0.0, upper);
        if (candidate == current) continue;
        const double error = problem.trial_error(i, candidate);
        ++evaluations;
        const double value = objective(problem.trial_energy(i, candidate), error);
        if (value < best) {
          problem.accept(i, candidate);
          best = value;
          best_error = error;
          improved = true;
          break;
        }
      }
    }
    if (improved) continue;
    step *= 0.5;
    if (step < min_step) {
      if (penalty >= 1e12) break;
      penalty *= 10.0;
      step = 0.1 * initial_step;
      best = objective(problem.energy(), best_error);
    }
  }
  return {problem.controls(), problem.energy(), problem.endpoint_error(), evaluations};
}

}  // namespace

std::vector<CostateSample> costate_along(const PulseProgram& program,
                                         std::span<const double> thetas) {
  std::vector<CostateSample> out;
  out.reserve(thetas.size());
  const double lambda_a = program.lambda_a();
  for (double theta : thetas) {
    const Segment& seg = program.segment_at(theta);
    const ArcValues v = arc_values(program, seg.kind, theta);
    out.push_back({theta, v.lambda, lambda_a, hamiltonian(v.u, theta, v.lambda, lambda_a)});
  }
  return out;
}

HamiltonianReport check_hamiltonian(const PulseProgram& program, double tol, std::size_t grid) {
  HamiltonianReport report;
  report.tolerance = tol;
  const double lambda_a = program.lambda_a();
  const auto consider = [&](double theta, double h) {
    if (!(std::abs(h) <= report.max_abs_h)) {
      report.max_abs_h = std::isnan(h) ? std::numeric_limits<double>::infinity() : std::abs(h);
      report.worst_theta = theta;
    }
  };
  const double end = program.target.angle();
  for (std::size_t i = 0; i <= grid; ++i) {
    const double theta = end * static_cast<double>(i) / static_cast<double>(grid);
    const ArcValues v = arc_values(program, program.segment_at(theta).kind, theta);
    consider(theta, hamiltonian(v.u, theta, v.lambda, lambda_a));
  }
  // The costate is continuous, so mixing the two sides at a switch must still
  // give H = 0.
  for (std::size_t k = 1; k < program.segments.size(); ++k) {
    const double theta = program.segments[k].theta_lo;
    const ArcValues left = arc_values(program, program.segments[k - 1].kind, theta);
    const ArcValues right = arc_values(program, program.segments[k].kind, theta);
    consider(theta, hamiltonian(right.u, theta, left.lambda, lambda_a));
    consider(theta, hamiltonian(left.u, theta, right.lambda, lambda_a));
  }
  report.passed = report.max_abs_h < tol;
  return report;
}

AdjointReport check_adjoint(const Trajectory& trajectory, double lambda_a,
                            std::span<const double> switch_angles, double tol,
                            std::size_t exclusion) {
  AdjointReport report;
  report.tolerance = tol;
  const auto& s = trajectory.samples;
  if (s.size() < 3) throw Error(ErrorCode::InvalidArgument, "trajectory too short for differences");

  std::vector<bool> skip(s.size(), false);
  for (double angle : switch_angles) {
    std::size_t k = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double d = std::abs(s[i].state.theta - angle);
      if (d < best) {
        best = d;
        k = i;
      }
    }
    const std::size_t lo = k > exclusion ? k - exclusion : 0;
    const std::size_t hi = std::min(s.size() - 1, k + exclusion);
    for (std::size_t i = lo; i <= hi; ++i) skip[i] = true;
  }

  double scale = 0.0;
  std::vector<std::pair<double, double>> residuals;  // (t, |fd - rhs|)
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (skip[i]) continue;
    const double h1 = s[i].t - s[i - 1].t;
    const double h2 = s[i + 1].t - s[i].t;
    // Shortened event-located steps amplify round-off.
    if (std::min(h1, h2) < 0.5 * std::max(h1, h2)) continue;
    const double l0 = s[i - 1].lambda_theta;
    const double l1 = s[i].lambda_theta;
    const double l2 = s[i + 1].lambda_theta;
    if (!std::isfinite(l0) || !std::isfinite(l1) || !std::isfinite(l2)) {
      throw Error(ErrorCode::InvalidArgument, "trajectory carries no costate");
    }
    const double fd = -h2 / (h1 * (h1 + h2)) * l0 + (h2 - h1) / (h1 * h2) * l1 +
                      h1 / (h2 * (h1 + h2)) * l2;
    const double theta = s[i].state.theta;
    const double rhs = l1 * std::cos(2.0 * theta) + lambda_a * std::sin(2.0 * theta);
    scale = std::max(scale, std::abs(rhs));
    residuals.emplace_back(s[i].t, std::abs(fd - rhs));
  }
  report.points_checked = residuals.size();
  if (residuals.empty()) throw Error(ErrorCode::InvalidArgument, "no samples left to check");
  if (scale == 0.0) scale = 1.0;
  for (const auto& [t, r] : residuals) {
    const double rel = r / scale;
    if (rel > report.max_residual) {
      report.max_residual = rel;
      report.worst_t = t;
    }
  }
  report.passed = report.max_residual < tol;
  return report;
}

AdjointReport check_adjoint(const PulseProgram& program, double tol, const StepControl& control) {
  const Trajectory trajectory = simulate_program(program, control);
  const std::vector<double> switches = program.switch_angles();
  return check_adjoint(trajectory, program.lambda_a(), switches, tol);
}

bool lambda_excess_ok(const PulseProgram& program, std::size_t grid, double slack) {
  for (const Segment& seg : program.segments) {
    for (std::size_t i = 1; i < grid; ++i) {
      const double theta = seg.theta_lo + (seg.theta_hi - seg.theta_lo) * static_cast<double>(i) /
                                              static_cast<double>(grid);
      const double lambda = arc_values(program, seg.kind, theta).lambda;
      if (seg.kind == Segment::Kind::Saturated ? !(lambda > program.m)
                                               : !(lambda <= program.m + slack)) {
        return false;
      }
    }
  }
  return true;
}

PolarState simulate_piecewise_constant(std::span<const double> controls, double horizon,
                                       std::size_t substeps) {
  if (controls.empty() || !(horizon > 0.0) || substeps == 0) {
    throw Error(ErrorCode::InvalidArgument, "need controls, a positive horizon and substeps");
  }
  const double dt = horizon / static_cast<double>(controls.size());
  Endpoint s{0.0, 0.0};
  for (double u : controls) s = advance(s, u, dt, substeps);
  return {s.a, s.theta};
}

OracleResult oracle_transcription(double m, const PulseTarget& target, const OracleOptions& options) {
  if (!std::isfinite(m)) throw Error(ErrorCode::InvalidArgument, "oracle needs a finite control bound");
  if (options.segments < 20) throw Error(ErrorCode::InvalidArgument, "oracle needs at least 20 segments");
  const PulseProgram program = synthesize(m, target);

  OracleResult result;
  if (target.axis == TargetAxis::HalfPi) {
    result.target_theta = kPi / 2;
    result.target_radius = target.radius;
  } else {
    // Stop short of the asymptotic pole; map the radius along the final arc.
    const double theta = kPi - 1e-3;
    const double c = std::cos(theta);
    const double k2 = program.kappa * program.kappa;
    result.target_theta = theta;
    result.target_radius = target.radius * (c + std::sqrt(c * c + k2)) *
                           (1.0 + std::sqrt(1.0 + k2)) / k2;
  }
  result.synthesized_energy = energy_up_to(program, result.target_theta);

  const Trajectory reference = simulate_program(program);
  double t99 = reference.back().t;
  double t_target = reference.back().t;
  bool found99 = false;
  for (const auto& sample : reference.samples) {
    if (!found99 && sample.state.theta >= 0.99 * target.angle()) {
      t99 = sample.t;
      found99 = true;
    }
    if (sample.state.theta >= result.target_theta) {
      t_target = sample.t;
      break;
    }
  }
  result.horizon = 3.0 * t99;

  // Initial guess: idle at the pole, then the synthesized control shifted so
  // that it ends at the horizon.
  const std::size_t n = options.segments;
  const double dt = result.horizon / static_cast<double>(n);
  const double shift = result.horizon - t_target;
  std::vector<double> guess(n, 0.0);
  {
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      constexpr int kProbes = 16;
      for (int p = 0; p < kProbes; ++p) {
        const double t = (static_cast<double>(i) + (p + 0.5) / kProbes) * dt - shift;
        if (t < 0.0 || t > t_target) continue;
        while (j + 1 < reference.samples.size() && reference.samples[j + 1].t < t) ++j;
        const auto& a = reference.samples[j];
        const auto& b = reference.samples[std::min(j + 1, reference.samples.size() - 1)];
        const double w = b.t > a.t ? (t - a.t) / (b.t - a.t) : 0.0;
        sum += a.u + w * (b.u - a.u);
      }
      guess[i] = std::clamp(sum / kProbes, 0.0, m);
    }
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  const std::size_t starts = 1 + options.restarts;
  const std::size_t primary_budget = options.restarts == 0 ? options.evaluations : options.evaluations / 2;
  const std::size_t restart_budget =
      options.restarts == 0 ? 0 : (options.evaluations - primary_budget) / options.restarts;

  bool have = false;
  for (std::size_t start = 0; start < starts; ++start) {
    std::vector<double> u = guess;
    if (start > 0) {
      for (double& v : u) v = std::clamp(v * (1.0 + jitter(rng)), 0.0, m);
    }
    Transcription problem(std::move(u), result.horizon, options.substeps, result.target_radius,
                          result.target_theta);
    const DescentOutcome run = coordinate_descent(std::move(problem), m,
                                                  start == 0 ? primary_budget : restart_budget);
    result.evaluations += run.evaluations;
    if (run.error > options.endpoint_tolerance) continue;
    if (!have || run.energy < result.best_energy) {
      have = true;
      result.best_energy = run.energy;
      result.endpoint_error = run.error;
      result.control_grid = run.controls;
    }
  }
  if (!have) {
    throw Error(ErrorCode::DidNotConverge, "no oracle run met the endpoint tolerance within the "
                                           "evaluation budget");
  }
  return result;
}

VerificationReport verify_program(const PulseProgram& program, double h_tol, double adjoint_tol,
                                  const StepControl& control) {
  VerificationReport report;
  report.hamiltonian = check_hamiltonian(program, h_tol);
  report.adjoint = check_adjoint(program, adjoint_tol, control);
  report.lambda_excess = lambda_excess_ok(program);
  return report;
}

}  // namespace bloch
