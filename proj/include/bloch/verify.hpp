#pragma once

// Numerical checks of the maximum-principle necessary conditions along a
// synthesized program, plus a direct-transcription search that looks for a
// cheaper discretized control reaching the same target.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bloch/core.hpp"
#include "bloch/program.hpp"
#include "bloch/target.hpp"

namespace bloch {

struct CostateSample {
  double theta = 0.0;
  double lambda_theta = 0.0;
  double lambda_a = 0.0;
  double hamiltonian = 0.0;
};

std::vector<CostateSample> costate_along(const PulseProgram& program,
                                         std::span<const double> thetas);

struct HamiltonianReport {
  double max_abs_h = 0.0;
  double worst_theta = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// max |H| on a uniform theta grid over the program. At every switch angle H is
// also evaluated with the control from one side and the costate from the
// other, which is nonzero whenever lambda_theta jumps there.
HamiltonianReport check_hamiltonian(const PulseProgram& program, double tol,
                                    std::size_t grid = 10'000);

struct AdjointReport {
  double max_residual = 0.0;  // relative to max |dlambda/dt| along the run
  double worst_t = 0.0;
  std::size_t points_checked = 0;
  double tolerance = 0.0;
  bool passed = false;
};

// Central differences of lambda_theta(t) against lambda_theta cos 2theta +
// lambda_a sin 2theta. Samples within `exclusion` steps of a switch angle are
// skipped.
AdjointReport check_adjoint(const Trajectory& trajectory, double lambda_a,
                            std::span<const double> switch_angles, double tol,
                            std::size_t exclusion = 10);
AdjointReport check_adjoint(const PulseProgram& program, double tol,
                            const StepControl& control = {});

// lambda_theta > m strictly inside every saturated arc and lambda_theta <= m on
// smooth arcs (to `slack`), checked on a uniform grid.
bool lambda_excess_ok(const PulseProgram& program, std::size_t grid = 10'000,
                      double slack = 1e-9);

struct OracleOptions {
  std::size_t segments = 200;
  std::size_t evaluations = 50'000;
  std::uint64_t seed = 7;
  std::size_t restarts = 2;
  std::size_t substeps = 8;  // RK4 steps per control segment
  double endpoint_tolerance = 1e-3;
};

struct OracleResult {
  double best_energy = 0.0;
  std::vector<double> control_grid;  // piecewise-constant u over equal time slices
  double horizon = 0.0;
  double endpoint_error = 0.0;
  double target_theta = 0.0;
  double target_radius = 0.0;
  double synthesized_energy = 0.0;  // of the reference program up to target_theta
  std::size_t evaluations = 0;
};

// Endpoint of a piecewise-constant control applied from (a, theta) = (0, 0).
PolarState simulate_piecewise_constant(std::span<const double> controls, double horizon,
                                       std::size_t substeps = 8);

// Throws DidNotConverge when no run ends within endpoint_tolerance.
OracleResult oracle_transcription(double m, const PulseTarget& target,
                                  const OracleOptions& options = {});

struct VerificationReport {
  HamiltonianReport hamiltonian;
  AdjointReport adjoint;
  bool lambda_excess = false;
  std::optional<OracleResult> oracle;

  bool passed() const noexcept {
    return hamiltonian.passed && adjoint.passed && lambda_excess;
  }
};

VerificationReport verify_program(const PulseProgram& program, double h_tol, double adjoint_tol,
                                  const StepControl& control = {});

}  // namespace bloch
