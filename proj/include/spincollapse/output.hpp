#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "spincollapse/config.hpp"
#include "spincollapse/experiment.hpp"
#include "spincollapse/observables.hpp"

namespace spincollapse {

inline constexpr const char* kTrajectoryHeader = "t,M,E_exch,S_sys_z,B_field,norm,E_U";

// Shortest decimal text with 15 significant digits ("%.15g").
std::string format_number(double x);

// Sign, basis and seed conventions shared by every output file.
nlohmann::json convention_notes();

// Lines prefixed with '#' carrying the metadata document, then the header and
// one row per record.
std::string trajectory_csv(const std::vector<ObservableRecord>& rows, const nlohmann::json& metadata);

// Parses rows written by trajectory_csv, skipping '#' lines. Throws
// std::runtime_error on a malformed table.
std::vector<ObservableRecord> parse_trajectory_csv(const std::string& text);

nlohmann::json outcome_json(const RunOutcome& o);
nlohmann::json born_curve_json(const BornCurve& curve);

// Writes through a temporary file in the same directory, then renames.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace spincollapse
