// Command-line front end over the blochpulse C API.
//
//   blochpulse synthesize --m 2 --target pi --r-final 0.39 --out ex1.json
//   blochpulse simulate --pulse ex1.json --csv ex1.csv
//   blochpulse curves --m 2 --csv curves.csv
//   blochpulse landmarks --m 2 --json
//   blochpulse verify --pulse ex1.json
//   blochpulse oracle --m 2 --target pi --r-final 0.39 --grid 200 --seed 7
//
// Exit codes: 0 success, 1 usage or input error, 2 unreachable target,
// 3 verification failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bloch/bloch_pulse.h"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kUnreachable = 2, kVerifyFailed = 3 };

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Owns a string returned by the C API.
struct ApiString {
  char* p = nullptr;
  ~ApiString() { bp_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

int exit_code_for(bp_status status) {
  switch (status) {
    case BP_OK: return kOk;
    case BP_ERR_UNREACHABLE: return kUnreachable;
    case BP_ERR_DID_NOT_CONVERGE: return kVerifyFailed;
    default: return kUsage;
  }
}

void check(bp_status status) {
  if (status != BP_OK) throw CliError(exit_code_for(status), bp_last_error());
}

double parse_bound(const std::string& text, bool allow_infinite) {
  if (text == "inf") {
    if (!allow_infinite) throw CliError(kUsage, "--m inf is only accepted by synthesize");
    return std::numeric_limits<double>::infinity();
  }
  double m = 0.0;
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  if (!(in >> m) || !in.eof()) throw CliError(kUsage, "--m expects a number or 'inf', got '" + text + "'");
  if (!(m > 0.5)) throw CliError(kUsage, "BoundTooSmall: control bound must satisfy m > 1/2, got " + text);
  return m;
}

bp_axis parse_axis(const std::string& text) {
  if (text == "pi") return BP_AXIS_PI;
  if (text == "pi2") return BP_AXIS_HALF_PI;
  throw CliError(kUsage, "--target accepts only 'pi' or 'pi2'");
}

void check_radius(double r) {
  if (!(r > 0.0 && r < 1.0)) {
    throw CliError(kUsage, "TargetOutOfRange: --r-final must lie in (0, 1), got " + num(r));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kUsage, "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(kUsage, "cannot write " + path);
  out << contents;
  if (!out) throw CliError(kUsage, "failed writing " + path);
}

struct ProgramHandle {
  bp_program* p = nullptr;
  ~ProgramHandle() { bp_program_free(p); }
};

ProgramHandle load_program(const std::string& path) {
  ProgramHandle h;
  check(bp_program_from_json(read_file(path).c_str(), &h.p));
  return h;
}

const char* regime_name(bp_regime r) {
  switch (r) {
    case BP_REGIME_NONE: return "none";
    case BP_REGIME_ONE: return "one";
    case BP_REGIME_TWO: return "two";
    case BP_REGIME_UNREACHABLE: return "unreachable";
  }
  return "unknown";
}

std::string optional_angle(double v) { return std::isnan(v) ? "-" : num(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-energy pi/2 and pi pulses for the relaxing Bloch equations"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file (flags override it)");

  std::string m_text;
  std::string target_text;
  double r_final = 0.0;
  std::string out_path;
  std::string pulse_path;
  std::string csv_path;
  double step = 1e-4;
  std::size_t samples = 400;
  bool json = false;
  double h_tol = 1e-8;
  double adjoint_tol = 1e-4;
  bool with_oracle = false;
  std::uint64_t seed = 7;
  std::size_t grid = 200;
  std::size_t evaluations = 50'000;

  auto* synth = app.add_subcommand("synthesize", "Synthesize the optimal feedback pulse");
  synth->add_option("--m", m_text, "Control bound m > 1/2, or 'inf'")->required();
  synth->add_option("--target", target_text, "Final axis: pi or pi2")->required();
  synth->add_option("--r-final", r_final, "Final radius in (0, 1)")->required();
  synth->add_option("--out", out_path, "Write the pulse program JSON here");
  synth->add_flag("--json", json, "Print the pulse program JSON on stdout");

  auto* sim = app.add_subcommand("simulate", "Integrate the closed loop of a pulse program");
  sim->add_option("--pulse", pulse_path, "Pulse program JSON")->required();
  sim->add_option("--step", step, "RK4 step in rescaled time (default 1e-4)");
  sim->add_option("--csv", csv_path, "Write the trajectory CSV here");

  auto* curves = app.add_subcommand("curves", "Export switching curves and the reachable boundary");
  curves->add_option("--m", m_text, "Control bound m > 1/2")->required();
  curves->add_option("--samples", samples, "Points per curve (default 400)");
  curves->add_option("--csv", csv_path, "Write the CSV here instead of stdout");

  auto* marks = app.add_subcommand("landmarks", "Print the landmark radii for a control bound");
  marks->add_option("--m", m_text, "Control bound m > 1/2")->required();
  marks->add_flag("--json", json, "Machine-readable JSON on stdout");

  auto* verify = app.add_subcommand("verify", "Check the maximum-principle conditions of a program");
  verify->add_option("--pulse", pulse_path, "Pulse program JSON")->required();
  verify->add_option("--tol", h_tol, "Tolerance on max |H| (default 1e-8)");
  verify->add_option("--adjoint-tol", adjoint_tol, "Tolerance on the adjoint residual (default 1e-4)");
  verify->add_option("--step", step, "RK4 step for the adjoint check (default 1e-4)");
  verify->add_flag("--with-oracle", with_oracle, "Also run the transcription oracle");
  verify->add_option("--seed", seed, "Oracle seed (default 7)");
  verify->add_flag("--json", json, "Print only the JSON report");

  auto* oracle = app.add_subcommand("oracle", "Search discretized controls for a cheaper transfer");
  oracle->add_option("--m", m_text, "Control bound m > 1/2")->required();
  oracle->add_option("--target", target_text, "Final axis: pi or pi2")->required();
  oracle->add_option("--r-final", r_final, "Final radius in (0, 1)")->required();
  oracle->add_option("--grid", grid, "Number of piecewise-constant segments (default 200)");
  oracle->add_option("--evaluations", evaluations, "Objective evaluation budget (default 50000)");
  oracle->add_option("--seed", seed, "Random restart seed (default 7)");
  oracle->add_flag("--json", json, "Print only the JSON result");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*synth) {
      const double m = parse_bound(m_text, true);
      const bp_axis axis = parse_axis(target_text);
      check_radius(r_final);
      ProgramHandle program;
      double limit = 0.0;
      const bp_status status = bp_synthesize(m, axis, r_final, &program.p, &limit);
      if (status == BP_ERR_UNREACHABLE) {
        std::cerr << bp_last_error() << "\n";
        std::cout << "unreachable r_limit=" << num(limit) << "\n";
        return kUnreachable;
      }
      check(status);
      ApiString text;
      check(bp_program_to_json(program.p, &text.p));
      if (!out_path.empty()) write_file(out_path, text.str());
      if (json) {
        std::cout << text.str();
      } else {
        bp_program_info info;
        check(bp_program_get_info(program.p, &info));
        std::cout << "regime=" << regime_name(info.regime) << " theta1=" << optional_angle(info.theta1)
                  << " theta2=" << optional_angle(info.theta2) << " kappa=" << num(info.kappa)
                  << " energy=" << num(info.energy) << "\n";
      }
      return kOk;
    }

    if (*sim) {
      ProgramHandle program = load_program(pulse_path);
      bp_program_info pinfo;
      check(bp_program_get_info(program.p, &pinfo));
      bp_trajectory* raw = nullptr;
      check(bp_simulate(program.p, step, &raw));
      struct Guard {
        bp_trajectory* t;
        ~Guard() { bp_trajectory_free(t); }
      } guard{raw};
      if (!csv_path.empty()) {
        ApiString csv;
        check(bp_trajectory_to_csv(raw, &csv.p));
        write_file(csv_path, csv.str());
      }
      bp_trajectory_info info;
      check(bp_trajectory_get_info(raw, &info));
      const double deviation = (info.energy - pinfo.energy) / pinfo.energy;
      // For pi targets the run stops just short of the pole; target_r is the
      // closed-form radius the final arc tends to.
      std::cout << "final_r=" << num(info.final_r) << " final_theta=" << num(info.final_theta)
                << " target_r=" << num(pinfo.r_final)
                << " final_t=" << num(info.final_t) << " energy=" << num(info.energy)
                << " predicted_energy=" << num(pinfo.energy) << " relative_deviation=" << num(deviation)
                << " samples=" << info.samples << "\n";
      return kOk;
    }

    if (*curves) {
      const double m = parse_bound(m_text, false);
      ApiString csv;
      check(bp_curves_csv(m, samples, &csv.p));
      if (csv_path.empty()) {
        std::cout << csv.str();
      } else {
        write_file(csv_path, csv.str());
      }
      return kOk;
    }

    if (*marks) {
      const double m = parse_bound(m_text, false);
      ApiString text;
      check(bp_landmarks_json(m, &text.p));
      if (json) {
        std::cout << text.str();
      } else {
        const auto j = nlohmann::ordered_json::parse(text.str());
        for (const auto& [key, value] : j.items()) std::cout << key << " = " << num(value.get<double>()) << "\n";
      }
      return kOk;
    }

    if (*verify) {
      ProgramHandle program = load_program(pulse_path);
      ApiString text;
      int passed = 0;
      check(bp_verify_json(program.p, h_tol, adjoint_tol, step, with_oracle ? 1 : 0, seed, &text.p, &passed));
      std::cout << text.str();
      if (!json) std::cout << (passed ? "PASS" : "FAIL") << "\n";
      return passed ? kOk : kVerifyFailed;
    }

    if (*oracle) {
      const double m = parse_bound(m_text, false);
      const bp_axis axis = parse_axis(target_text);
      check_radius(r_final);
      if (grid < 20) throw CliError(kUsage, "--grid must be at least 20");
      ApiString text;
      check(bp_oracle_json(m, axis, r_final, grid, evaluations, seed, &text.p));
      if (json) {
        std::cout << text.str();
      } else {
        const auto j = nlohmann::ordered_json::parse(text.str());
        std::cout << "best_energy=" << num(j["best_energy"].get<double>())
                  << " synthesized_energy=" << num(j["synthesized_energy"].get<double>())
                  << " endpoint_error=" << num(j["endpoint_error"].get<double>())
                  << " horizon=" << num(j["horizon"].get<double>()) << "\n";
      }
      return kOk;
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
