#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spincollapse/config.hpp"

namespace spincollapse {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitSolver = 3,
  kExitInvariant = 4,
};

struct CommandContext {
  RootConfig config;
  std::filesystem::path out_dir = ".";
  std::ostream* log = nullptr;  // progress lines; null for silence
};

struct RunSeeds {
  std::uint64_t coupling = 0;
  std::uint64_t lanczos = 0;
};

// Seeds of a single run derived from a base seed: the ensemble seeds of grid
// index 0, run 0.
RunSeeds run_seeds(std::uint64_t base_seed);

// Writes trajectory.csv and summary.json. Returns the summary document.
nlohmann::json cmd_run(const CommandContext& ctx, double theta_deg, RunSeeds seeds);

// Writes ensemble.json, plus one CSV per run when keep_trajectories is set.
nlohmann::json cmd_ensemble(const CommandContext& ctx, bool keep_trajectories = false);

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  nlohmann::json to_json() const;
};

// Invariant suite on reduced universes (at most 10 sites) built from the
// configured model and integrator settings. Writes validate.json.
ValidationReport cmd_validate(const CommandContext& ctx);

struct OracleReport {
  int n_sites = 0;
  double max_amplitude_error = 0.0;
  double max_M_error = 0.0;
  nlohmann::json to_json() const;
};

// Matrix-free against dense propagation of the configured model and
// trajectory. Throws ConfigError beyond 12 sites. Writes oracle.csv and
// oracle.json.
OracleReport cmd_oracle(const CommandContext& ctx, double theta_deg, RunSeeds seeds);

}  // namespace spincollapse
