// Acceptance suite: one PASS/FAIL line per criterion.

#include <CLI11.hpp>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spincollapse/chebyshev.hpp"
#include "spincollapse/dense_oracle.hpp"
#include "spincollapse/experiment.hpp"
#include "spincollapse/lanczos.hpp"
#include "spincollapse/model.hpp"
#include "spincollapse/observables.hpp"

using namespace spincollapse;

namespace {

// Tolerances and gates.
constexpr double kNormTolerance = 1e-9;
constexpr double kEnergyTolerance = 1e-6;
constexpr double kPlainDriftFloor = 1e-4;
constexpr double kLinearMeanAbsM = 0.3;
constexpr double kLinearMeanAbsSys = 0.1;
constexpr double kDecidedRate = 0.9;
constexpr double kSignAgreement = 0.95;
constexpr double kBornMidLow = 0.38;
constexpr double kBornMidHigh = 0.62;
constexpr double kBornZeroMin = 0.8;
constexpr double kBornRightMax = 0.2;
constexpr double kOracleTolerance = 1e-8;
constexpr double kAnchorTolerance = 1e-10;
constexpr double kPlateauExchange = -1.35;
constexpr double kPlateauDigits = 0.005;

const double kQuarter = 0.25 * std::numbers::pi;

struct Scale {
  std::string name;
  int conservation_env = 15;  // criteria 1 and 2
  int linear_env = 15;        // criterion 3
  int linear_runs = 8;
  int collapse_env = 15;  // criterion 4
  int collapse_runs = 32;
  int born_env = 15;  // criterion 5
  int born_runs = 96;
  int trend_env4 = 15;  // criterion 6, N_A = 4
  int trend_env8 = 15;  // criterion 6, N_A = 8
  int trend_runs = 96;
  int oracle_env = 5;  // criterion 7, N_A = 4; L = N_E + 5
};

Scale scale_for(const std::string& name) {
  Scale s;
  s.name = name;
  if (name == "ci") {
    s.conservation_env = s.linear_env = s.collapse_env = 5;
    s.born_env = 3;
    s.born_runs = 16;
    s.trend_env4 = 5;
    s.trend_env8 = 1;
    s.trend_runs = 8;
  } else if (name == "reduced") {
    s.conservation_env = s.linear_env = s.collapse_env = s.born_env = 11;
    s.born_runs = 48;
    s.trend_env4 = 11;
    s.trend_env8 = 7;
    s.trend_runs = 48;
  }
  return s;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Context {
  Scale scale;
  std::uint64_t seed = 1;
  double t_max = 200.0;
  double dt = 0.05;
  bool progress = true;
};

std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

RunSpec base_spec(const Context& ctx, int n_a, int n_e, double mu) {
  RunSpec spec;
  spec.model.n_apparatus = n_a;
  spec.model.n_environment = n_e;
  spec.model.mu = mu;
  spec.trajectory.t_max = ctx.t_max;
  spec.trajectory.dt = ctx.dt;
  spec.trajectory.norm_tolerance = std::numeric_limits<double>::infinity();
  spec.trajectory.energy_tolerance = std::numeric_limits<double>::infinity();
  spec.m_threshold = 0.25 * n_a;
  spec.dwell = 20.0;
  return spec;
}

BornCurve run_curve(const Context& ctx, const std::string& tag, const std::vector<double>& grid,
                    int runs, const RunSpec& templ, bool keep_rows) {
  const std::size_t total = grid.size() * static_cast<std::size_t>(runs);
  std::size_t done = 0;
  const auto on_run = [&](std::size_t k, std::size_t r, const EnsembleRun& run) {
    ++done;
    if (!ctx.progress) return;
    std::fprintf(stderr, "  [%s] %zu/%zu theta#%zu run %zu: %s (%.1f s)\n", tag.c_str(), done,
                 total, k, r,
                 run.outcome ? to_string(run.outcome->classification) : run.error.c_str(),
                 run.wall_seconds);
  };
  return born_curve(grid, runs, ctx.seed, templ, on_run, keep_rows);
}

std::vector<double> born_grid() {
  std::vector<double> g;
  for (int d = 0; d <= 90; d += 15) g.push_back(d * std::numbers::pi / 180.0);
  return g;
}

double decided_rate(const BornPoint& p) {
  const long total = p.n_runs + p.n_failed;
  return total == 0 ? 0.0 : static_cast<double>(p.n_up + p.n_down) / static_cast<double>(total);
}

// Criteria 1 and 2 share one trajectory.
struct ConservationRun {
  TrajectoryRecord trajectory;
  std::string error;
};

const ConservationRun& conservation_run(const Context& ctx) {
  static std::map<std::string, ConservationRun> cache;
  auto it = cache.find(ctx.scale.name);
  if (it != cache.end()) return it->second;
  ConservationRun out;
  try {
    RunSpec spec = base_spec(ctx, 4, ctx.scale.conservation_env, 12.0);
    spec.theta = kQuarter;
    spec.coupling_seed = ensemble_coupling_seed(ctx.seed, 0, 0);
    spec.lanczos_seed = ensemble_lanczos_seed(ctx.seed, 0, 0);
    out.trajectory = run_single(spec).trajectory;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return cache.emplace(ctx.scale.name, std::move(out)).first->second;
}

std::string size_note(int n_a, int n_e) {
  return "N_A=" + std::to_string(n_a) + " N_E=" + std::to_string(n_e) +
         " (L=" + std::to_string(1 + n_a + n_e) + ")";
}

Verdict criterion_norm(const Context& ctx) {
  const ConservationRun& run = conservation_run(ctx);
  if (!run.error.empty()) return {false, "run failed: " + run.error};
  const double drift = run.trajectory.max_norm_drift;
  return {drift < kNormTolerance, size_note(4, ctx.scale.conservation_env) +
                                      ", t_max=" + fmt(ctx.t_max) + ", max |norm-1| = " +
                                      fmt(drift, 3) + " (< " + fmt(kNormTolerance) + ")"};
}

Verdict criterion_universe_energy(const Context& ctx) {
  const ConservationRun& run = conservation_run(ctx);
  if (!run.error.empty()) return {false, "run failed: " + run.error};
  const double eu = run.trajectory.max_energy_drift;
  const double plain = run.trajectory.max_plain_energy_drift;
  return {eu < kEnergyTolerance && plain > kPlainDriftFloor,
          size_note(4, ctx.scale.conservation_env) + ", relative E_U drift " + fmt(eu, 3) +
              " (< " + fmt(kEnergyTolerance) + "), plain <H> drift " + fmt(plain, 3) + " (> " +
              fmt(kPlainDriftFloor) + ")"};
}

Verdict criterion_linear_persistence(const Context& ctx) {
  RunSpec templ = base_spec(ctx, 4, ctx.scale.linear_env, 0.0);
  const BornCurve curve =
      run_curve(ctx, "linear", {kQuarter}, ctx.scale.linear_runs, templ, true);
  const BornPoint& p = curve.points.front();
  double worst_mean_m = 0.0;
  double worst_mean_sys = 0.0;
  double peak_sys = 0.0;
  for (const EnsembleRun& run : p.runs) {
    if (run.rows.empty()) continue;
    double sum_m = 0.0, sum_sys = 0.0;
    for (const ObservableRecord& r : run.rows) {
      sum_m += std::abs(r.M);
      sum_sys += std::abs(r.S_sys_z);
      peak_sys = std::max(peak_sys, std::abs(r.S_sys_z));
    }
    const double n = static_cast<double>(run.rows.size());
    worst_mean_m = std::max(worst_mean_m, sum_m / n);
    worst_mean_sys = std::max(worst_mean_sys, sum_sys / n);
  }
  const bool pass = p.n_failed == 0 && p.n_undecided == ctx.scale.linear_runs &&
                    worst_mean_m < kLinearMeanAbsM && worst_mean_sys < kLinearMeanAbsSys;
  return {pass, size_note(4, ctx.scale.linear_env) + ", " + std::to_string(p.n_undecided) + "/" +
                    std::to_string(ctx.scale.linear_runs) + " UNDECIDED (" +
                    std::to_string(p.n_failed) + " failed), max time-averaged |M| " +
                    fmt(worst_mean_m, 3) + " (< " + fmt(kLinearMeanAbsM) +
                    "), max time-averaged |S_sys^z| " + fmt(worst_mean_sys, 3) + " (< " +
                    fmt(kLinearMeanAbsSys) + "), peak |S_sys^z| " + fmt(peak_sys, 3)};
}

Verdict criterion_nonlinear_collapse(const Context& ctx) {
  const RunSpec templ = base_spec(ctx, 4, ctx.scale.collapse_env, 12.0);
  const BornCurve curve =
      run_curve(ctx, "collapse", {kQuarter}, ctx.scale.collapse_runs, templ, false);
  const BornPoint& p = curve.points.front();
  long agree = 0;
  double max_abs_m = 0.0;
  for (const EnsembleRun& run : p.runs) {
    if (!run.outcome) continue;
    max_abs_m = std::max(max_abs_m, std::abs(run.outcome->final_M));
    if (run.outcome->classification == Outcome::Undecided) continue;
    if ((run.outcome->final_S_sys_z > 0.0) == (run.outcome->final_M > 0.0)) ++agree;
  }
  const long decided = p.n_up + p.n_down;
  const double rate = decided_rate(p);
  const double agreement =
      decided == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(decided);
  const bool pass = rate >= kDecidedRate && agreement >= kSignAgreement && p.n_up > 0 &&
                    p.n_down > 0;
  return {pass, size_note(4, ctx.scale.collapse_env) + ", decided " + std::to_string(decided) +
                    "/" + std::to_string(ctx.scale.collapse_runs) + " (rate " + fmt(rate, 3) +
                    ", need " + fmt(kDecidedRate) + "), up " + std::to_string(p.n_up) +
                    " down " + std::to_string(p.n_down) + ", sign agreement " +
                    fmt(agreement, 3) + " (need " + fmt(kSignAgreement) + "), max |final M| " +
                    fmt(max_abs_m, 3) + " vs threshold " + fmt(templ.m_threshold)};
}

std::string curve_summary(const BornCurve& curve) {
  std::string s;
  for (const BornPoint& p : curve.points) {
    s += " " + fmt(std::round(p.theta * 180.0 / std::numbers::pi)) + ":" +
         (std::isnan(p.p_up) ? std::string("n/a") : fmt(p.p_up, 3)) + "[" +
         std::to_string(p.n_up) + "/" + std::to_string(p.n_down) + "/" +
         std::to_string(p.n_undecided) + "]";
  }
  return s;
}

Verdict criterion_born(const Context& ctx) {
  const RunSpec templ = base_spec(ctx, 4, ctx.scale.born_env, 12.0);
  const std::vector<double> grid = born_grid();
  const BornCurve curve = run_curve(ctx, "born", grid, ctx.scale.born_runs, templ, false);
  const auto& pts = curve.points;
  const auto p_of = [&](std::size_t k) { return pts[k].p_up; };
  bool pass = !std::isnan(p_of(3)) && p_of(3) >= kBornMidLow && p_of(3) <= kBornMidHigh;
  pass = pass && !std::isnan(p_of(0)) && p_of(0) >= kBornZeroMin;
  pass = pass && !std::isnan(p_of(6)) && p_of(6) <= kBornRightMax;
  double min_rate = 1.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    min_rate = std::min(min_rate, decided_rate(pts[k]));
    if (k > 0 && pts[k].interval.low > pts[k - 1].interval.high) pass = false;
  }
  pass = pass && min_rate >= kDecidedRate;
  return {pass, size_note(4, ctx.scale.born_env) + ", " + std::to_string(ctx.scale.born_runs) +
                    " runs/theta, min decided rate " + fmt(min_rate, 3) +
                    ", p_up[up/down/undecided]:" + curve_summary(curve)};
}

// Mean |p_up - cos^2| over the grid and the mean Wilson half-width.
std::pair<double, double> born_deviation(const BornCurve& curve) {
  double dev = 0.0, width = 0.0;
  for (const BornPoint& p : curve.points) {
    if (std::isnan(p.p_up)) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    dev += std::abs(p.p_up - p.reference);
    width += 0.5 * (p.interval.high - p.interval.low);
  }
  const double n = static_cast<double>(curve.points.size());
  return {dev / n, width / n};
}

Verdict criterion_size_trend(const Context& ctx) {
  const std::vector<double> grid = born_grid();
  const BornCurve four = run_curve(ctx, "trend4", grid, ctx.scale.trend_runs,
                                   base_spec(ctx, 4, ctx.scale.trend_env4, 12.0), false);
  const BornCurve eight = run_curve(ctx, "trend8", grid, ctx.scale.trend_runs,
                                    base_spec(ctx, 8, ctx.scale.trend_env8, 6.0), false);
  const auto [d4, w4] = born_deviation(four);
  const auto [d8, w8] = born_deviation(eight);
  const double slack = std::hypot(w4, w8);
  const bool pass = !std::isnan(d4) && !std::isnan(d8) && d8 <= d4 + slack;
  return {pass, size_note(4, ctx.scale.trend_env4) + " vs " + size_note(8, ctx.scale.trend_env8) +
                    ", " + std::to_string(ctx.scale.trend_runs) +
                    " runs/theta, deviation N_A=4 " + fmt(d4, 3) + ", N_A=8 " + fmt(d8, 3) +
                    ", slack " + fmt(slack, 3) + "; N_A=4:" + curve_summary(four) +
                    "; N_A=8:" + curve_summary(eight)};
}

double max_abs_diff(const StateVector& a, const StateVector& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

Verdict criterion_oracles(const Context& ctx) {
  double prop_err = 0.0, lanczos_err = 0.0;
  int instances = 0;
  const int n_e = ctx.scale.oracle_env;
  for (const auto& [n_a, env] : std::vector<std::pair<int, int>>{{4, n_e}, {8, n_e - 4}}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      ModelConfig m;
      m.n_apparatus = n_a;
      m.n_environment = env;
      m.mu = 0.0;
      const CouplingSet c = build_couplings(m, seed);
      const Hamiltonian h(c);
      const DenseMatrix hd = dense_linear_hamiltonian(c);
      // Propagation: 200 steps of dt = 0.05 from a random state.
      const DensePropagator u(hd, 0.05);
      StateVector x = random_state(h.dimension(), seed + 100);
      StateVector y = x;
      for (int k = 0; k < 200; ++k) {
        x = chebyshev_step(h, FieldValue{0.0}, x, 0.05, ChebyshevConfig{});
        y = u.apply(y);
        prop_err = std::max(prop_err, max_abs_diff(x, y));
      }
      // Ground energies of the full linear Hamiltonian and of the environment.
      LanczosConfig lc;
      lc.start_seed = seed;
      const LinearOperator apply_h = [&](const StateVector& in, StateVector& out) {
        out = apply_linear_hamiltonian(h, in);
      };
      const double e_full = lanczos_ground_state(apply_h, h.dimension(), lc).energy;
      lanczos_err = std::max(lanczos_err, std::abs(e_full - dense_ground_energy(hd)));
      const double e_env = environment_ground_state(c, lc).energy;
      lanczos_err = std::max(lanczos_err,
                             std::abs(e_env - dense_ground_energy(dense_environment_hamiltonian(c))));
      ++instances;
    }
  }
  return {prop_err < kOracleTolerance && lanczos_err < kOracleTolerance,
          std::to_string(instances) + " instances at L=" + std::to_string(n_e + 5) +
              ", max amplitude error " + fmt(prop_err, 3) + ", max ground-energy error " +
              fmt(lanczos_err, 3) + " (< " + fmt(kOracleTolerance) + ")"};
}

Verdict criterion_anchors(const Context&) {
  ModelConfig m;
  m.n_environment = 1;
  const CouplingSet c = build_couplings(m, 1);
  const int n = c.layout().num_sites();
  // Fully up rectangle: 4 edges of weight 1 and 2 diagonals of weight 1/sqrt2,
  // each contributing -J/4.
  const StateVector up = basis_state(n, 0b11110);
  const double e_rect = exchange_energy(c, up);
  const double e_rect_ref = -(4.0 + 2.0 / std::sqrt(2.0)) / 4.0;
  const double err_rect = std::abs(e_rect - e_rect_ref);
  const bool plateau = std::abs(e_rect - kPlateauExchange) < kPlateauDigits;
  // One apparatus spin in a|up> + b|dn>, the other three in a zero-moment
  // superposition.
  const double a = 0.8, b = 0.6;
  StateVector one(2);
  one << b, a;
  StateVector rest = StateVector::Zero(8);
  rest[0b011] = rest[0b100] = 1.0 / std::sqrt(2.0);
  const StateVector app = Eigen::kroneckerProduct(rest, one).eval();
  StateVector sys(2), env(2);
  sys << 1.0, 0.0;
  env << 1.0, 0.0;
  const StateVector psi = tensor_product(sys, app, env);
  const double err_flip = std::abs(magnetization(psi, c) - 0.5 * (a * a - b * b));
  // Polarized H_B eigenvalue against mu N_A^2 / 4.
  const double gap = 12.0 * 4.0 * 4.0 / 4.0;
  double err_hb = std::abs(degeneracy_split(12.0, 4) - gap);
  for (BasisState bits : {BasisState{0b11110}, BasisState{0}}) {
    const StateVector pol = basis_state(n, bits);
    const StateVector hb = apply_nonlinear_term(c, magnetization_field(pol, c), pol);
    err_hb = std::max(err_hb, max_abs_diff(hb, -gap * pol));
  }
  const bool pass = err_rect < kAnchorTolerance && plateau && err_flip < kAnchorTolerance &&
                    err_hb < kAnchorTolerance;
  return {pass, "E_exch(up rectangle) " + fmt(e_rect, 12) + " err " + fmt(err_rect, 3) +
                    "; one-flip M err " + fmt(err_flip, 3) + "; H_B polarized eigenvalue err " +
                    fmt(err_hb, 3) + " (each < " + fmt(kAnchorTolerance) + ")"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict(const Context&)> check;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria for the spin-collapse simulator"};
  std::string scale = "ci";
  std::vector<int> selected;
  Context ctx;
  bool quiet = false;
  app.add_option("--scale", scale, "Problem size preset")
      ->check(CLI::IsMember({"ci", "reduced", "full"}));
  app.add_option("--criterion", selected, "Criteria to run (default: all)")
      ->check(CLI::Range(1, 8));
  app.add_option("--seed", ctx.seed, "Base seed");
  app.add_option("--dt", ctx.dt, "Time step")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "No per-run progress");
  CLI11_PARSE(app, argc, argv);
  ctx.scale = scale_for(scale);
  ctx.progress = !quiet;

  const std::vector<Criterion> all = {
      {1, "norm conservation", criterion_norm},
      {2, "universe energy conservation", criterion_universe_energy},
      {3, "linear persistence", criterion_linear_persistence},
      {4, "nonlinear collapse", criterion_nonlinear_collapse},
      {5, "Born statistics", criterion_born},
      {6, "size trend", criterion_size_trend},
      {7, "oracle equivalence", criterion_oracles},
      {8, "analytic anchors", criterion_anchors},
  };
  const std::set<int> wanted(selected.begin(), selected.end());
  std::printf("acceptance scale=%s seed=%llu dt=%g t_max=%g\n", scale.c_str(),
              static_cast<unsigned long long>(ctx.seed), ctx.dt, ctx.t_max);
  std::fflush(stdout);
  int failures = 0;
  for (const Criterion& cr : all) {
    if (!wanted.empty() && !wanted.count(cr.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = cr.check(ctx);
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %s: %s (%.1f s) %s\n", cr.id, cr.name, v.pass ? "PASS" : "FAIL", secs,
                v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
