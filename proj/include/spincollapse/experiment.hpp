#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spincollapse/evolve.hpp"
#include "spincollapse/lanczos.hpp"
#include "spincollapse/model.hpp"

namespace spincollapse {

struct RunSpec {
  double theta = 0.0;  // radians, [0, pi/2]
  double phi = 0.0;    // radians, [0, 2 pi)
  std::uint64_t coupling_seed = 1;
  std::uint64_t lanczos_seed = 1;
  ModelConfig model;
  TrajectoryConfig trajectory;
  ChebyshevConfig chebyshev;
  LanczosConfig lanczos;  // start_seed is replaced by lanczos_seed
  double m_threshold = 1.0;
  double dwell = 20.0;
};

enum class Outcome { CollapsedUp, CollapsedDown, Undecided };

const char* to_string(Outcome o);

struct RunOutcome {
  Outcome classification = Outcome::Undecided;
  std::optional<double> collapse_time;
  double final_M = 0.0;
  double final_S_sys_z = 0.0;
};

struct RunResult {
  TrajectoryRecord trajectory;
  RunOutcome outcome;
  double environment_energy = 0.0;
  double environment_residual = 0.0;
};

// cos(theta) |up> + sin(theta) e^{i phi} |dn>, as amplitudes (dn, up) in
// bit order.
StateVector system_state(double theta, double phi);

// |up dn up dn ...> over n_a apparatus sites; zero magnetization for even n_a.
StateVector apparatus_neel_state(int n_a);

// Throws ConfigError for odd N_A or angles out of range, UsageError when
// env_ground has the wrong dimension.
StateVector prepare_initial_state(double theta, double phi, const CouplingSet& c,
                                  const StateVector& env_ground);
StateVector prepare_initial_state(const RunSpec& spec, const CouplingSet& c,
                                  const StateVector& env_ground);

// Ground state of H_E alone by Lanczos.
GroundState environment_ground_state(const CouplingSet& c, const LanczosConfig& cfg);

// Finds the longest final stretch of records with |M| >= m_threshold and a
// single sign of M. Collapsed when that stretch lasts at least dwell; the
// collapse time is its first record.
RunOutcome classify_outcome(const std::vector<ObservableRecord>& rows, double m_threshold,
                            double dwell);

// Couplings, environment ground state, preparation, evolution and
// classification. Deterministic in the spec.
RunResult run_single(const RunSpec& spec, const Observer& observer = {});

double predicted_probability(double theta);

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// Wilson score interval for k successes in n trials; [0, 1] when n = 0.
Interval wilson_interval(long k, long n, double z = 1.959963984540054);

struct EnsembleRun {
  std::uint64_t coupling_seed = 0;
  std::uint64_t lanczos_seed = 0;
  std::optional<RunOutcome> outcome;  // absent when the run failed
  std::string error;
  double wall_seconds = 0.0;
  long matvecs = 0;
  std::vector<ObservableRecord> rows;  // kept only on request
};

struct BornPoint {
  double theta = 0.0;  // radians
  long n_runs = 0;     // completed runs: n_up + n_down + n_undecided
  long n_up = 0;
  long n_down = 0;
  long n_undecided = 0;
  long n_failed = 0;
  double p_up = 0.0;  // n_up / (n_up + n_down); NaN without decided runs
  Interval interval;
  double reference = 0.0;  // cos^2 theta
  std::vector<EnsembleRun> runs;
};

struct BornCurve {
  std::uint64_t base_seed = 0;
  std::vector<BornPoint> points;
};

// Seeds of run r at grid index k: coupling derive_seed(base, {k, r, 0}),
// Lanczos derive_seed(base, {k, r, 1}).
std::uint64_t ensemble_coupling_seed(std::uint64_t base_seed, std::size_t theta_index,
                                     std::size_t run_index);
std::uint64_t ensemble_lanczos_seed(std::uint64_t base_seed, std::size_t theta_index,
                                    std::size_t run_index);

using RunCallback = std::function<void(std::size_t theta_index, std::size_t run_index,
                                       const EnsembleRun&)>;

// Runs every (theta, run) pair of the grid. A failing run is recorded and the
// ensemble continues.
BornCurve born_curve(const std::vector<double>& theta_grid, int runs_per_theta,
                     std::uint64_t base_seed, const RunSpec& templ,
                     const RunCallback& on_run = {}, bool keep_rows = false);

}  // namespace spincollapse
