#include "bloch/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bloch/errors.hpp"

namespace bloch {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kDigits = 12;

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_significant(v);
}

ordered_json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return number(*v);
}

double require_number(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(ErrorCode::ParseError, std::string("field '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

std::optional<double> optional_field(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return require_number(j, key);
}

const char* segment_kind(Segment::Kind kind) {
  return kind == Segment::Kind::Smooth ? "smooth" : "saturated";
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, kDigits);
  return std::string(buf, res.ptr);
}

double round_significant(double v) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, kDigits);
  double out = v;
  std::from_chars(buf, res.ptr, out);
  return out;
}

std::string program_to_json(const PulseProgram& program) {
  ordered_json j;
  j["m"] = program.bounded() ? number(program.m) : ordered_json("inf");
  j["target"] = {{"r", number(program.target.radius)},
                 {"theta", program.target.axis == TargetAxis::Pi ? "pi" : "pi/2"}};
  j["regime"] = to_string(program.regime);
  j["kappa"] = number(program.kappa);
  j["theta1"] = optional_number(program.theta1);
  j["theta2"] = optional_number(program.theta2);
  j["energy"] = number(program.energy);
  ordered_json segments = ordered_json::array();
  for (const Segment& seg : program.segments) {
    segments.push_back({{"kind", segment_kind(seg.kind)},
                        {"theta_lo", number(seg.theta_lo)},
                        {"theta_hi", number(seg.theta_hi)}});
  }
  j["segments"] = std::move(segments);
  if (!program.diagnostics.empty()) j["diagnostics"] = program.diagnostics;
  return j.dump(2) + "\n";
}

PulseProgram program_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "pulse program must be a JSON object");

  double m = 0.0;
  if (j.contains("m") && j.at("m").is_string() && j.at("m").get<std::string>() == "inf") {
    m = kUnboundedControl;
  } else {
    m = require_number(j, "m");
  }

  if (!j.contains("target") || !j.at("target").is_object()) {
    throw Error(ErrorCode::ParseError, "field 'target' must be an object");
  }
  const ordered_json& t = j.at("target");
  PulseTarget target;
  target.radius = require_number(t, "r");
  if (!t.contains("theta") || !t.at("theta").is_string()) {
    throw Error(ErrorCode::ParseError, "field 'target.theta' must be \"pi\" or \"pi/2\"");
  }
  const std::string axis = t.at("theta").get<std::string>();
  if (axis == "pi") {
    target.axis = TargetAxis::Pi;
  } else if (axis == "pi/2") {
    target.axis = TargetAxis::HalfPi;
  } else {
    throw Error(ErrorCode::ParseError, "field 'target.theta' must be \"pi\" or \"pi/2\"");
  }

  if (!j.contains("regime") || !j.at("regime").is_string()) {
    throw Error(ErrorCode::ParseError, "field 'regime' must be a string");
  }
  const std::string regime_name = j.at("regime").get<std::string>();
  Regime regime;
  if (regime_name == "none") {
    regime = Regime::NoSwitch;
  } else if (regime_name == "one") {
    regime = Regime::OneSwitch;
  } else if (regime_name == "two") {
    regime = Regime::TwoSwitch;
  } else {
    throw Error(ErrorCode::ParseError, "field 'regime' must be none, one or two");
  }

  const double kappa = require_number(j, "kappa");
  const auto theta1 = optional_field(j, "theta1");
  const auto theta2 = optional_field(j, "theta2");
  PulseProgram program;
  try {
    program = assemble_program(m, target, regime, kappa, theta1, theta2);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("inconsistent pulse program: ") + e.what());
  }
  if (const auto stored = optional_field(j, "energy")) program.energy = *stored;
  return program;
}

std::string trajectory_to_csv(const Trajectory& trajectory) {
  std::ostringstream out;
  out << "t,theta,a,r,u,lambda_theta,hamiltonian\n";
  for (const TrajectorySample& s : trajectory.samples) {
    out << format_number(s.t) << ',' << format_number(s.state.theta) << ','
        << format_number(s.state.a) << ',' << format_number(s.state.radius()) << ','
        << format_number(s.u) << ',' << format_number(s.lambda_theta) << ','
        << format_number(s.hamiltonian) << '\n';
  }
  return out.str();
}

std::string geometry_to_csv(const SwitchingGeometry& geometry) {
  std::ostringstream out;
  out << "curve,theta,r\n";
  const auto emit = [&](const char* name, const std::vector<CurvePoint>& points) {
    for (const CurvePoint& p : points) {
      out << name << ',' << format_number(p.theta) << ',' << format_number(p.r) << '\n';
    }
  };
  emit("first", geometry.first_curve);
  emit("second", geometry.second_curve);
  emit("boundary", geometry.reachable_boundary);
  emit("noswitch_max", geometry.noswitch_max);
  return out.str();
}

std::string landmarks_to_json(const Landmarks& marks) {
  ordered_json j;
  j["m"] = number(marks.m);
  j["r_C1"] = number(marks.r_c1);
  j["r_D1"] = number(marks.r_d1);
  j["r_D2"] = number(marks.r_d2);
  if (marks.theta_b) {
    j["theta_B"] = number(*marks.theta_b);
    j["r_B"] = number(*marks.r_b);
    j["r_C2"] = number(*marks.r_c2);
    j["r_D3"] = number(*marks.r_d3);
  } else {
    j["theta_B1"] = number(*marks.theta_b1);
    j["theta_B2"] = number(*marks.theta_b2);
    j["r_B1"] = number(*marks.r_b1);
    j["r_B2"] = number(*marks.r_b2);
  }
  return j.dump() + "\n";
}

namespace {

ordered_json oracle_object(const OracleResult& result, bool with_controls) {
  ordered_json j;
  j["best_energy"] = number(result.best_energy);
  j["endpoint_error"] = number(result.endpoint_error);
  j["synthesized_energy"] = number(result.synthesized_energy);
  j["target_theta"] = number(result.target_theta);
  j["target_radius"] = number(result.target_radius);
  j["horizon"] = number(result.horizon);
  j["segments"] = result.control_grid.size();
  j["evaluations"] = result.evaluations;
  if (with_controls) {
    ordered_json grid = ordered_json::array();
    for (double u : result.control_grid) grid.push_back(number(u));
    j["control_grid"] = std::move(grid);
  }
  return j;
}

}  // namespace

std::string verification_to_json(const VerificationReport& report) {
  ordered_json j;
  j["max_abs_H"] = number(report.hamiltonian.max_abs_h);
  j["adjoint_residual"] = number(report.adjoint.max_residual);
  j["lambda_excess_ok"] = report.lambda_excess;
  j["oracle"] = report.oracle ? oracle_object(*report.oracle, false) : ordered_json(nullptr);
  j["passed"] = report.passed();
  return j.dump() + "\n";
}

std::string oracle_to_json(const OracleResult& result) { return oracle_object(result, true).dump() + "\n"; }

}  // namespace bloch
