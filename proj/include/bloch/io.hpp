#pragma once

// Text formats: PulseProgram and report JSON, trajectory and geometry CSV.
// Numbers carry 12 significant digits and never depend on the locale.

#include <string>
#include <string_view>

#include "bloch/core.hpp"
#include "bloch/program.hpp"
#include "bloch/switching.hpp"
#include "bloch/verify.hpp"

namespace bloch {

std::string format_number(double v);
double round_significant(double v);

std::string program_to_json(const PulseProgram& program);
// Rebuilds segments and energy from the stored switching structure.
// Throws ParseError on schema mismatch.
PulseProgram program_from_json(std::string_view text);

std::string trajectory_to_csv(const Trajectory& trajectory);
std::string geometry_to_csv(const SwitchingGeometry& geometry);
std::string landmarks_to_json(const Landmarks& marks);
std::string verification_to_json(const VerificationReport& report);
std::string oracle_to_json(const OracleResult& result);

}  // namespace bloch
