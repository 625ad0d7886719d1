#include "bloch/bloch_pulse.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "bloch/errors.hpp"
#include "bloch/io.hpp"
#include "bloch/switching.hpp"
#include "bloch/synthesis.hpp"
#include "bloch/verify.hpp"

struct bp_program {
  bloch::PulseProgram program;
};

struct bp_trajectory {
  bloch::Trajectory trajectory;
};

namespace {

thread_local std::string g_last_error;

bp_status status_of(bloch::ErrorCode code) {
  using bloch::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ZeroVector: return BP_ERR_INVALID_ARGUMENT;
    case ErrorCode::StallDetected:
    case ErrorCode::StepTooLarge: return BP_ERR_STALL;
    case ErrorCode::TargetOutOfRange: return BP_ERR_TARGET_OUT_OF_RANGE;
    case ErrorCode::BoundTooSmall: return BP_ERR_BOUND_TOO_SMALL;
    case ErrorCode::Unreachable: return BP_ERR_UNREACHABLE;
    case ErrorCode::NoBracket: return BP_ERR_NO_BRACKET;
    case ErrorCode::ParseError: return BP_ERR_PARSE;
    case ErrorCode::DidNotConverge: return BP_ERR_DID_NOT_CONVERGE;
    case ErrorCode::NonpositiveThetaDot:
    case ErrorCode::NoRealSwitch:
    case ErrorCode::AngleOutOfRange:
    case ErrorCode::DegenerateKappa: return BP_ERR_NUMERIC;
  }
  return BP_ERR_INTERNAL;
}

template <class F>
bp_status guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return BP_OK;
  } catch (const bloch::Error& e) {
    g_last_error = std::string(bloch::to_string(e.code())) + ": " + e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return BP_ERR_INTERNAL;
}

bloch::TargetAxis axis_of(bp_axis axis) {
  switch (axis) {
    case BP_AXIS_HALF_PI: return bloch::TargetAxis::HalfPi;
    case BP_AXIS_PI: return bloch::TargetAxis::Pi;
  }
  throw bloch::Error(bloch::ErrorCode::InvalidArgument, "unknown target axis");
}

bp_regime regime_of(bloch::Regime regime) {
  switch (regime) {
    case bloch::Regime::NoSwitch: return BP_REGIME_NONE;
    case bloch::Regime::OneSwitch: return BP_REGIME_ONE;
    case bloch::Regime::TwoSwitch: return BP_REGIME_TWO;
    case bloch::Regime::Unreachable: return BP_REGIME_UNREACHABLE;
  }
  return BP_REGIME_UNREACHABLE;
}

template <class T>
void require(const T* p, const char* what) {
  if (p == nullptr) {
    throw bloch::Error(bloch::ErrorCode::InvalidArgument, std::string(what) + " must not be null");
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bloch::StepControl step_control(double step) {
  bloch::StepControl ctl;
  if (step > 0.0) ctl.step = step;
  return ctl;
}

}  // namespace

extern "C" {

const char* bp_last_error(void) { return g_last_error.c_str(); }

const char* bp_status_string(bp_status status) {
  switch (status) {
    case BP_OK: return "ok";
    case BP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BP_ERR_BOUND_TOO_SMALL: return "control bound too small";
    case BP_ERR_TARGET_OUT_OF_RANGE: return "target radius out of range";
    case BP_ERR_UNREACHABLE: return "target unreachable";
    case BP_ERR_NO_BRACKET: return "no switching point bracketed";
    case BP_ERR_STALL: return "integration stalled";
    case BP_ERR_PARSE: return "parse error";
    case BP_ERR_DID_NOT_CONVERGE: return "did not converge";
    case BP_ERR_NUMERIC: return "numerical domain error";
    case BP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void bp_string_free(char* s) { std::free(s); }

bp_status bp_classify(double m, bp_axis axis, double r_final, bp_regime* out) {
  return guard([&] {
    require(out, "out");
    *out = regime_of(bloch::classify(m, {r_final, axis_of(axis)}));
  });
}

bp_status bp_limit_radius(double m, bp_axis axis, double* out) {
  return guard([&] {
    require(out, "out");
    *out = bloch::max_reachable_radius(m, axis_of(axis));
  });
}

bp_status bp_synthesize(double m, bp_axis axis, double r_final, bp_program** out,
                        double* limit_radius) {
  return guard([&] {
    require(out, "out");
    *out = nullptr;
    try {
      auto handle = std::make_unique<bp_program>();
      handle->program = bloch::synthesize(m, {r_final, axis_of(axis)});
      *out = handle.release();
    } catch (const bloch::UnreachableError& e) {
      if (limit_radius != nullptr) *limit_radius = e.limit_radius();
      throw;
    }
  });
}

bp_status bp_program_from_json(const char* json, bp_program** out) {
  return guard([&] {
    require(json, "json");
    require(out, "out");
    *out = nullptr;
    auto handle = std::make_unique<bp_program>();
    handle->program = bloch::program_from_json(json);
    *out = handle.release();
  });
}

bp_status bp_program_to_json(const bp_program* program, char** out) {
  return guard([&] {
    require(program, "program");
    require(out, "out");
    *out = duplicate(bloch::program_to_json(program->program));
  });
}

bp_status bp_program_get_info(const bp_program* program, bp_program_info* out) {
  return guard([&] {
    require(program, "program");
    require(out, "out");
    const bloch::PulseProgram& p = program->program;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    out->m = p.m;
    out->r_final = p.target.radius;
    out->axis = p.target.axis == bloch::TargetAxis::Pi ? BP_AXIS_PI : BP_AXIS_HALF_PI;
    out->regime = regime_of(p.regime);
    out->kappa = p.kappa;
    out->theta1 = p.theta1.value_or(nan);
    out->theta2 = p.theta2.value_or(nan);
    out->energy = p.energy;
  });
}

bp_status bp_program_control(const bp_program* program, double theta, double* u) {
  return guard([&] {
    require(program, "program");
    require(u, "u");
    *u = program->program.control(theta);
  });
}

void bp_program_free(bp_program* program) { delete program; }

bp_status bp_simulate(const bp_program* program, double step, bp_trajectory** out) {
  return guard([&] {
    require(program, "program");
    require(out, "out");
    *out = nullptr;
    auto handle = std::make_unique<bp_trajectory>();
    handle->trajectory = bloch::simulate_program(program->program, step_control(step));
    *out = handle.release();
  });
}

bp_status bp_trajectory_get_info(const bp_trajectory* trajectory, bp_trajectory_info* out) {
  return guard([&] {
    require(trajectory, "trajectory");
    require(out, "out");
    const auto& last = trajectory->trajectory.back();
    out->samples = trajectory->trajectory.samples.size();
    out->final_t = last.t;
    out->final_r = last.state.radius();
    out->final_theta = last.state.theta;
    out->energy = trajectory->trajectory.energy;
  });
}

bp_status bp_trajectory_to_csv(const bp_trajectory* trajectory, char** out) {
  return guard([&] {
    require(trajectory, "trajectory");
    require(out, "out");
    *out = duplicate(bloch::trajectory_to_csv(trajectory->trajectory));
  });
}

void bp_trajectory_free(bp_trajectory* trajectory) { delete trajectory; }

bp_status bp_curves_csv(double m, size_t samples, char** out) {
  return guard([&] {
    require(out, "out");
    *out = duplicate(bloch::geometry_to_csv(bloch::switching_geometry(m, samples)));
  });
}

bp_status bp_landmarks_json(double m, char** out) {
  return guard([&] {
    require(out, "out");
    *out = duplicate(bloch::landmarks_to_json(bloch::landmarks(m)));
  });
}

bp_status bp_verify_json(const bp_program* program, double h_tol, double adjoint_tol, double step,
                         int with_oracle, uint64_t seed, char** out, int* passed) {
  return guard([&] {
    require(program, "program");
    require(out, "out");
    const bloch::PulseProgram& p = program->program;
    bloch::VerificationReport report = bloch::verify_program(p, h_tol, adjoint_tol, step_control(step));
    if (with_oracle) {
      bloch::OracleOptions options;
      options.seed = seed;
      report.oracle = bloch::oracle_transcription(p.m, p.target, options);
    }
    if (passed != nullptr) *passed = report.passed() ? 1 : 0;
    *out = duplicate(bloch::verification_to_json(report));
  });
}

bp_status bp_oracle_json(double m, bp_axis axis, double r_final, size_t segments,
                         size_t evaluations, uint64_t seed, char** out) {
  return guard([&] {
    require(out, "out");
    bloch::OracleOptions options;
    if (segments > 0) options.segments = segments;
    if (evaluations > 0) options.evaluations = evaluations;
    options.seed = seed;
    *out = duplicate(bloch::oracle_to_json(bloch::oracle_transcription(m, {r_final, axis_of(axis)}, options)));
  });
}

}  // extern "C"
