#include "spincollapse/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "spincollapse/dense_oracle.hpp"
#include "spincollapse/errors.hpp"
#include "spincollapse/output.hpp"

#ifndef SPINCOLLAPSE_VERSION
#define SPINCOLLAPSE_VERSION "unknown"
#endif

namespace spincollapse {

using nlohmann::json;

namespace {

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

json metadata(const CommandContext& ctx, const std::string& command) {
  return {
      {"artifact", "spincollapse"},
      {"version", SPINCOLLAPSE_VERSION},
      {"command", command},
      {"config", config_to_json(ctx.config)},
      {"conventions", convention_notes()},
  };
}

void check_theta(double theta_deg) {
  if (!(theta_deg >= 0.0 && theta_deg <= 90.0))
    throw ConfigError("must lie in [0, 90]", "theta_deg");
}

double max_abs_diff(const StateVector& a, const StateVector& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

RunSeeds run_seeds(std::uint64_t base_seed) {
  return {ensemble_coupling_seed(base_seed, 0, 0), ensemble_lanczos_seed(base_seed, 0, 0)};
}

json cmd_run(const CommandContext& ctx, double theta_deg, RunSeeds seeds) {
  check_theta(theta_deg);
  const RunSpec spec = make_run_spec(ctx.config, deg_to_rad(theta_deg), seeds.coupling, seeds.lanczos);
  Observer progress;
  if (ctx.log) {
    progress = [&](const ObservableRecord& r) {
      *ctx.log << "t=" << format_number(r.t) << " M=" << format_number(r.M)
               << " S_sys_z=" << format_number(r.S_sys_z) << '\n';
    };
  }
  const RunResult res = run_single(spec, progress);

  json meta = metadata(ctx, "run");
  meta["theta_deg"] = theta_deg;
  meta["seeds"] = {{"coupling_seed", seeds.coupling}, {"lanczos_seed", seeds.lanczos}};
  write_text_file(ctx.out_dir / "trajectory.csv", trajectory_csv(res.trajectory.rows, meta));

  json summary = meta;
  summary["outcome"] = outcome_json(res.outcome);
  summary["diagnostics"] = {
      {"steps", res.trajectory.steps},
      {"matvecs", res.trajectory.matvecs},
      {"max_norm_drift", res.trajectory.max_norm_drift},
      {"max_relative_E_U_drift", res.trajectory.max_energy_drift},
      {"max_relative_H_drift", res.trajectory.max_plain_energy_drift},
      {"max_field_residual", res.trajectory.max_field_residual},
      {"environment_ground_energy", res.environment_energy},
      {"environment_residual", res.environment_residual},
  };
  write_text_file(ctx.out_dir / "summary.json", summary.dump(2) + "\n");
  return summary;
}

json cmd_ensemble(const CommandContext& ctx, bool keep_trajectories) {
  const RootConfig& cfg = ctx.config;
  std::vector<double> grid;
  for (double d : cfg.experiment.theta_grid_degrees) grid.push_back(deg_to_rad(d));
  const RunSpec templ = make_run_spec(cfg, 0.0, 0, 0);
  RunCallback on_run;
  if (ctx.log) {
    on_run = [&](std::size_t k, std::size_t r, const EnsembleRun& run) {
      *ctx.log << "theta=" << cfg.experiment.theta_grid_degrees[k] << " run=" << r << ' '
               << (run.outcome ? to_string(run.outcome->classification) : "FAILED: " + run.error)
               << " wall=" << format_number(run.wall_seconds) << "s\n";
      ctx.log->flush();
    };
  }
  const BornCurve curve = born_curve(grid, cfg.experiment.runs_per_theta,
                                     cfg.experiment.base_seed, templ, on_run, keep_trajectories);
  json doc = metadata(ctx, "ensemble");
  doc["ensemble_diversity"] = "fresh coupling realization and Lanczos start vector per run";
  doc["born_curve"] = born_curve_json(curve);
  if (keep_trajectories) {
    for (std::size_t k = 0; k < curve.points.size(); ++k) {
      for (std::size_t r = 0; r < curve.points[k].runs.size(); ++r) {
        const EnsembleRun& run = curve.points[k].runs[r];
        if (!run.outcome) continue;
        json meta = metadata(ctx, "ensemble");
        meta["theta_deg"] = cfg.experiment.theta_grid_degrees[k];
        meta["seeds"] = {{"coupling_seed", run.coupling_seed}, {"lanczos_seed", run.lanczos_seed}};
        std::ostringstream name;
        name << "trajectories/theta" << k << "_run" << r << ".csv";
        write_text_file(ctx.out_dir / name.str(), trajectory_csv(run.rows, meta));
      }
    }
  }
  write_text_file(ctx.out_dir / "ensemble.json", doc.dump(2) + "\n");
  return doc;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

json ValidationReport::to_json() const {
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"passed", c.passed},
                   {"value", c.value},
                   {"tolerance", c.tolerance},
                   {"detail", c.detail}});
  }
  return {{"passed", passed()}, {"checks", arr}};
}

ValidationReport cmd_validate(const CommandContext& ctx) {
  const RootConfig& cfg = ctx.config;
  ValidationReport rep;
  auto add = [&](std::string name, double value, double tol, std::string detail = {}) {
    const bool ok = std::isfinite(value) && value <= tol;
    rep.checks.push_back({std::move(name), ok, value, tol, std::move(detail)});
    if (ctx.log) {
      *ctx.log << (ok ? "PASS " : "FAIL ") << rep.checks.back().name << " value=" << value
               << " tol=" << tol;
      if (!rep.checks.back().detail.empty()) *ctx.log << " (" << rep.checks.back().detail << ')';
      *ctx.log << '\n';
    }
  };

  const RunSeeds seeds = run_seeds(cfg.experiment.base_seed);
  ModelConfig small = cfg.model;
  small.n_environment = std::max(1, 7 - small.n_apparatus);
  const CouplingSet c = build_couplings(small, seeds.coupling);
  const Hamiltonian h(c);
  const Eigen::Index dim = h.dimension();
  const std::string size_note = "L=" + std::to_string(c.layout().num_sites());

  // Hermiticity of the frozen Hamiltonian on random vectors.
  {
    const StateVector x = random_state(dim, seeds.lanczos ^ 1), y = random_state(dim, seeds.lanczos ^ 2);
    StateVector hx, hy;
    const FieldValue f{0.37};
    h.apply_frozen(f, x, hx);
    h.apply_frozen(f, y, hy);
    const double err = std::abs(x.dot(hy) - std::conj(y.dot(hx)));
    add("hermiticity", err, 1e-12 * spectral_bound(h, f.b_tilde), size_note);
  }
  // Matrix-free against dense Hamiltonian, column by column.
  const DenseMatrix h_dense = dense_linear_hamiltonian(c);
  {
    double err = 0.0;
    StateVector e = StateVector::Zero(dim), col;
    for (Eigen::Index b = 0; b < dim; ++b) {
      e.setZero();
      e[b] = 1.0;
      h.apply_frozen({0.0}, e, col);
      err = std::max(err, (col - h_dense.col(b)).cwiseAbs().maxCoeff());
    }
    add("dense_hamiltonian", err, 1e-12, size_note);
  }
  // One propagation step preserves the norm.
  {
    const StateVector x = random_state(dim, seeds.lanczos ^ 3);
    const StateVector y = chebyshev_step(h, {0.8}, x, cfg.trajectory.dt, cfg.chebyshev);
    add("chebyshev_unitarity", std::abs(y.norm() - 1.0), 1e-12, size_note);
  }
  // Linear propagation against the dense matrix exponential.
  {
    StateVector x = random_state(dim, seeds.lanczos ^ 4), y = x;
    const DensePropagator u(h_dense, cfg.trajectory.dt);
    double err = 0.0;
    for (int k = 0; k < 10; ++k) {
      x = chebyshev_step(h, {0.0}, x, cfg.trajectory.dt, cfg.chebyshev);
      y = u.apply(y);
      err = std::max(err, max_abs_diff(x, y));
    }
    add("oracle_linear_propagation", err, 1e-8, size_note + ", 10 steps");
  }
  // Lanczos against dense diagonalization of an environment.
  {
    ModelConfig env_model = cfg.model;
    env_model.n_environment = std::min(8, cfg.model.n_environment);
    const CouplingSet ce = build_couplings(env_model, seeds.coupling);
    LanczosConfig lc = cfg.lanczos;
    lc.start_seed = seeds.lanczos;
    const double e_mf = environment_ground_state(ce, lc).energy;
    const double e_dense = dense_ground_energy(dense_environment_hamiltonian(ce));
    add("oracle_lanczos_energy", std::abs(e_mf - e_dense), 1e-8,
        "N_E=" + std::to_string(env_model.n_environment));
  }
  // Norm and universe energy over a configured trajectory.
  LanczosConfig lc = cfg.lanczos;
  lc.start_seed = seeds.lanczos;
  const StateVector psi0 =
      prepare_initial_state(0.25 * std::numbers::pi, 0.0, c, environment_ground_state(c, lc).state);
  TrajectoryConfig loose = cfg.trajectory;
  loose.t_max = std::max(cfg.trajectory.dt, std::min(cfg.trajectory.t_max, 20.0));
  loose.norm_tolerance = std::numeric_limits<double>::infinity();
  loose.energy_tolerance = std::numeric_limits<double>::infinity();
  {
    const TrajectoryRecord tr = evolve(h, psi0, loose, cfg.chebyshev);
    std::ostringstream note;
    note << size_note << ", t_max=" << loose.t_max << ", dt=" << loose.dt
         << ", plain <H> drift " << tr.max_plain_energy_drift;
    add("norm_conservation", tr.max_norm_drift, cfg.trajectory.norm_tolerance, note.str());
    add("universe_energy_conservation", tr.max_energy_drift, cfg.trajectory.energy_tolerance,
        note.str());
  }
  // Self-convergence in dt and the same-scheme dense oracle on a 6-site toy.
  {
    ModelConfig toy_model = cfg.model;
    toy_model.n_apparatus = 4;
    toy_model.n_environment = 1;
    if (toy_model.mu == 0.0) toy_model.mu = 12.0;
    const CouplingSet toy = build_couplings(toy_model, seeds.coupling);
    const StateVector start = prepare_initial_state(
        0.25 * std::numbers::pi, 0.0, toy, environment_ground_state(toy, lc).state);
    TrajectoryConfig coarse = loose;
    coarse.t_max = std::max(cfg.trajectory.dt, std::min(cfg.trajectory.t_max, 5.0));
    coarse.record_stride = 1;
    TrajectoryConfig fine = coarse;
    fine.dt = 0.5 * coarse.dt;
    fine.record_stride = 2;
    const TrajectoryRecord a = evolve(toy, start, coarse, cfg.chebyshev);
    const TrajectoryRecord b = evolve(toy, start, fine, cfg.chebyshev);
    double err = 0.0;
    for (std::size_t k = 0; k < std::min(a.rows.size(), b.rows.size()); ++k)
      err = std::max(err, std::abs(a.rows[k].M - b.rows[k].M));
    add("dt_halving", err, 1e-6, "L=6, max |M(dt) - M(dt/2)| up to t=" + format_number(coarse.t_max));

    const DenseTrajectory d = dense_evolve(toy, start, coarse);
    add("oracle_nonlinear_propagation", max_abs_diff(a.final_state, d.states.back()), 1e-8,
        "L=6, final amplitudes");
  }
  write_text_file(ctx.out_dir / "validate.json",
                  json{{"metadata", metadata(ctx, "validate")}, {"report", rep.to_json()}}.dump(2) + "\n");
  return rep;
}

json OracleReport::to_json() const {
  return {{"n_sites", n_sites},
          {"max_amplitude_error", max_amplitude_error},
          {"max_M_error", max_M_error}};
}

OracleReport cmd_oracle(const CommandContext& ctx, double theta_deg, RunSeeds seeds) {
  check_theta(theta_deg);
  const RootConfig& cfg = ctx.config;
  const int n_sites = 1 + cfg.model.n_apparatus + cfg.model.n_environment;
  if (n_sites > kMaxOracleSites)
    throw ConfigError("dense oracle refuses " + std::to_string(n_sites) + " sites (limit " +
                          std::to_string(kMaxOracleSites) + ")",
                      "model.N_E");
  const CouplingSet c = build_couplings(cfg.model, seeds.coupling);
  LanczosConfig lc = cfg.lanczos;
  lc.start_seed = seeds.lanczos;
  const StateVector psi0 = prepare_initial_state(deg_to_rad(theta_deg), cfg.experiment.phi, c,
                                                 environment_ground_state(c, lc).state);
  const Hamiltonian h(c);
  const TrajectoryRecord mf = evolve(h, psi0, cfg.trajectory, cfg.chebyshev);
  const DenseTrajectory dn = dense_evolve(c, psi0, cfg.trajectory);

  const DenseMatrix h_lin = dense_linear_hamiltonian(c);
  const Eigen::VectorXd m_diag = dense_magnetization_operator(c).diagonal().real();
  OracleReport rep;
  rep.n_sites = n_sites;
  rep.max_amplitude_error = max_abs_diff(mf.final_state, dn.states.back());
  std::ostringstream csv;
  csv << "t,M_matrix_free,M_dense,E_U_matrix_free,E_U_dense\n";
  for (std::size_t k = 0; k < std::min(mf.rows.size(), dn.states.size()); ++k) {
    const StateVector& v = dn.states[k];
    const double m = (v.cwiseAbs2().array() * m_diag.array()).sum();
    const double e_u = v.dot(h_lin * v).real() - 0.5 * c.mu() * m * m;
    rep.max_M_error = std::max(rep.max_M_error, std::abs(m - mf.rows[k].M));
    csv << format_number(mf.rows[k].t) << ',' << format_number(mf.rows[k].M) << ','
        << format_number(m) << ',' << format_number(mf.rows[k].E_U) << ',' << format_number(e_u)
        << '\n';
  }
  write_text_file(ctx.out_dir / "oracle.csv", csv.str());
  json doc = metadata(ctx, "oracle");
  doc["theta_deg"] = theta_deg;
  doc["seeds"] = {{"coupling_seed", seeds.coupling}, {"lanczos_seed", seeds.lanczos}};
  doc["report"] = rep.to_json();
  write_text_file(ctx.out_dir / "oracle.json", doc.dump(2) + "\n");
  return rep;
}

}  // namespace spincollapse
