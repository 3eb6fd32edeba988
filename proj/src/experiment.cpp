#include "spincollapse/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <numbers>

#include "spincollapse/errors.hpp"
#include "spincollapse/parallel.hpp"
#include "spincollapse/rng.hpp"

namespace spincollapse {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::CollapsedUp: return "COLLAPSED_UP";
    case Outcome::CollapsedDown: return "COLLAPSED_DOWN";
    case Outcome::Undecided: break;
  }
  return "UNDECIDED";
}

StateVector system_state(double theta, double phi) {
  StateVector s(2);
  s[1] = std::cos(theta);
  s[0] = std::sin(theta) * std::polar(1.0, phi);
  return s;
}

StateVector apparatus_neel_state(int n_a) {
  if (n_a < 0 || n_a > 30) throw UsageError("apparatus size out of range");
  BasisState bits = 0;
  for (int k = 0; k < n_a; k += 2) bits |= BasisState{1} << k;
  StateVector s = StateVector::Zero(Eigen::Index{1} << n_a);
  s[static_cast<Eigen::Index>(bits)] = 1.0;
  return s;
}

StateVector prepare_initial_state(double theta, double phi, const CouplingSet& c,
                                  const StateVector& env_ground) {
  const int na = c.config.n_apparatus;
  if (na % 2 != 0) throw ConfigError("alternating apparatus state needs even N_A", "model.N_A");
  if (!(theta >= 0.0 && theta <= 0.5 * std::numbers::pi))
    throw ConfigError("theta must lie in [0, 90] degrees", "experiment.theta");
  if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi))
    throw ConfigError("phi must lie in [0, 2 pi)", "experiment.phi");
  if (env_ground.size() != Eigen::Index{1} << c.config.n_environment)
    throw UsageError("environment state dimension mismatch");
  return tensor_product(system_state(theta, phi), apparatus_neel_state(na), env_ground);
}

StateVector prepare_initial_state(const RunSpec& spec, const CouplingSet& c,
                                  const StateVector& env_ground) {
  return prepare_initial_state(spec.theta, spec.phi, c, env_ground);
}

GroundState environment_ground_state(const CouplingSet& c, const LanczosConfig& cfg) {
  const PairHamiltonian h_env(c.config.n_environment, environment_pairs(c));
  return lanczos_ground_state([&](const StateVector& x, StateVector& y) { h_env.apply(x, y); },
                              h_env.dimension(), cfg);
}

RunOutcome classify_outcome(const std::vector<ObservableRecord>& rows, double m_threshold,
                            double dwell) {
  RunOutcome out;
  if (rows.empty()) return out;
  out.final_M = rows.back().M;
  out.final_S_sys_z = rows.back().S_sys_z;
  const double sign = out.final_M >= 0.0 ? 1.0 : -1.0;
  std::size_t start = rows.size();
  while (start > 0) {
    const double m = sign * rows[start - 1].M;
    if (!(m >= m_threshold) || m <= 0.0) break;
    --start;
  }
  if (start == rows.size()) return out;
  if (rows.back().t - rows[start].t < dwell) return out;
  out.classification = sign > 0.0 ? Outcome::CollapsedUp : Outcome::CollapsedDown;
  out.collapse_time = rows[start].t;
  return out;
}

RunResult run_single(const RunSpec& spec, const Observer& observer) {
  const CouplingSet c = build_couplings(spec.model, spec.coupling_seed);
  LanczosConfig lanczos = spec.lanczos;
  lanczos.start_seed = spec.lanczos_seed;
  const GroundState env = environment_ground_state(c, lanczos);
  const StateVector psi0 = prepare_initial_state(spec, c, env.state);
  RunResult r;
  r.environment_energy = env.energy;
  r.environment_residual = env.residual;
  r.trajectory = evolve(Hamiltonian(c), psi0, spec.trajectory, spec.chebyshev, observer);
  r.outcome = classify_outcome(r.trajectory.rows, spec.m_threshold, spec.dwell);
  return r;
}

double predicted_probability(double theta) {
  const double c = std::cos(theta);
  return c * c;
}

Interval wilson_interval(long k, long n, double z) {
  if (n <= 0) return {};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::uint64_t ensemble_coupling_seed(std::uint64_t base_seed, std::size_t theta_index,
                                     std::size_t run_index) {
  return derive_seed(base_seed, {theta_index, run_index, 0});
}

std::uint64_t ensemble_lanczos_seed(std::uint64_t base_seed, std::size_t theta_index,
                                    std::size_t run_index) {
  return derive_seed(base_seed, {theta_index, run_index, 1});
}

BornCurve born_curve(const std::vector<double>& theta_grid, int runs_per_theta,
                     std::uint64_t base_seed, const RunSpec& templ, const RunCallback& on_run,
                     bool keep_rows) {
  if (runs_per_theta < 1) throw ConfigError("runs_per_theta must be >= 1", "experiment.runs_per_theta");
  BornCurve curve;
  curve.base_seed = base_seed;
  const std::size_t n_runs = static_cast<std::size_t>(runs_per_theta);
  for (std::size_t k = 0; k < theta_grid.size(); ++k) {
    BornPoint& pt = curve.points.emplace_back();
    pt.theta = theta_grid[k];
    pt.reference = predicted_probability(pt.theta);
    pt.runs.resize(n_runs);
    for (std::size_t r = 0; r < n_runs; ++r) {
      pt.runs[r].coupling_seed = ensemble_coupling_seed(base_seed, k, r);
      pt.runs[r].lanczos_seed = ensemble_lanczos_seed(base_seed, k, r);
    }
  }

  // Members are independent; each owns its vectors, so only the slot it
  // writes is shared.
  const std::size_t total = theta_grid.size() * n_runs;
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_threads())
  for (std::size_t idx = 0; idx < total; ++idx) {
    const std::size_t k = idx / n_runs, r = idx % n_runs;
    EnsembleRun& run = curve.points[k].runs[r];
    RunSpec spec = templ;
    spec.theta = theta_grid[k];
    spec.coupling_seed = run.coupling_seed;
    spec.lanczos_seed = run.lanczos_seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      RunResult res = run_single(spec);
      run.outcome = res.outcome;
      run.matvecs = res.trajectory.matvecs;
      if (keep_rows) run.rows = std::move(res.trajectory.rows);
    } catch (const std::exception& e) {
      run.error = e.what();
    }
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_run) {
#pragma omp critical(spincollapse_ensemble_callback)
      on_run(k, r, run);
    }
  }

  for (BornPoint& pt : curve.points) {
    for (const EnsembleRun& run : pt.runs) {
      if (!run.outcome) {
        ++pt.n_failed;
        continue;
      }
      ++pt.n_runs;
      switch (run.outcome->classification) {
        case Outcome::CollapsedUp: ++pt.n_up; break;
        case Outcome::CollapsedDown: ++pt.n_down; break;
        case Outcome::Undecided: ++pt.n_undecided; break;
      }
    }
    const long decided = pt.n_up + pt.n_down;
    pt.p_up = decided > 0 ? static_cast<double>(pt.n_up) / static_cast<double>(decided)
                          : std::numeric_limits<double>::quiet_NaN();
    pt.interval = wilson_interval(pt.n_up, decided);
  }
  return curve;
}

}  // namespace spincollapse
