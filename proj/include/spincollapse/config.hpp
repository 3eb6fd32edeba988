#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spincollapse/chebyshev.hpp"
#include "spincollapse/evolve.hpp"
#include "spincollapse/experiment.hpp"
#include "spincollapse/lanczos.hpp"
#include "spincollapse/model.hpp"

namespace spincollapse {

struct ExperimentConfig {
  std::vector<double> theta_grid_degrees{0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0};
  double phi = 0.0;
  int runs_per_theta = 96;
  double m_threshold = 1.0;  // N_A / 4 unless set
  double dwell = 20.0;
  std::uint64_t base_seed = 1;
};

struct RootConfig {
  ModelConfig model;
  TrajectoryConfig trajectory;
  ChebyshevConfig chebyshev;
  LanczosConfig lanczos;
  ExperimentConfig experiment;
};

// Configuration document layout (every key optional):
//
//   model:      N_A, N_E, gamma, Delta, Omega, Theta, mu
//   trajectory: dt, t_max, record_stride, norm_tolerance, energy_tolerance,
//               field_scheme ("midpoint" | "step_start")
//   chebyshev:  truncation_tolerance, max_order
//   lanczos:    max_iterations, residual_tolerance, krylov_dim
//   experiment: theta_grid_degrees, phi, runs_per_theta, m_threshold, dwell,
//               base_seed
//
// mu defaults to 48 / N_A and m_threshold to N_A / 4. Unknown keys and out of
// range values raise ConfigError naming the key path.
RootConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const RootConfig& cfg);

// An empty or whitespace-only file yields the defaults.
nlohmann::json read_config_document(const std::string& path);
RootConfig load_config(const std::string& path);

// Sets a dotted key path, e.g. "model.mu", parsing the value as JSON and
// falling back to a plain string.
void apply_override(nlohmann::json& doc, const std::string& key, const std::string& value);

// "key=value"
std::pair<std::string, std::string> split_override(const std::string& assignment);

// Run specification for one measurement from the validated configuration.
RunSpec make_run_spec(const RootConfig& cfg, double theta_rad, std::uint64_t coupling_seed,
                      std::uint64_t lanczos_seed);

}  // namespace spincollapse
