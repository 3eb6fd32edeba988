// Command-line front end: run, ensemble, validate, oracle.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "spincollapse/commands.hpp"
#include "spincollapse/errors.hpp"

using namespace spincollapse;

namespace {

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> coupling_seed;
  std::optional<std::uint64_t> lanczos_seed;
  double theta_deg = 45.0;
  std::string out_dir = ".";
  bool quiet = false;
  bool keep_trajectories = false;
};

CommandContext make_context(const Options& o) {
  nlohmann::json doc = o.config_path.empty() ? nlohmann::json::object()
                                             : read_config_document(o.config_path);
  for (const auto& a : o.overrides) {
    const auto [key, value] = split_override(a);
    apply_override(doc, key, value);
  }
  if (o.seed) doc["experiment"]["base_seed"] = *o.seed;
  CommandContext ctx;
  ctx.config = config_from_json(doc);
  ctx.out_dir = o.out_dir;
  if (!o.quiet) ctx.log = &std::cerr;
  return ctx;
}

RunSeeds seeds_for(const Options& o, const CommandContext& ctx) {
  RunSeeds s = run_seeds(ctx.config.experiment.base_seed);
  if (o.coupling_seed) s.coupling = *o.coupling_seed;
  if (o.lanczos_seed) s.lanczos = *o.lanczos_seed;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-free spin dynamics of a nonlinear measurement model"};
  app.set_version_flag("--version", SPINCOLLAPSE_VERSION);
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON configuration file");
    sub->add_option("--set", o.overrides, "Override a configuration key, e.g. model.mu=6");
    sub->add_option("--seed", o.seed, "Base seed (experiment.base_seed)");
    sub->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
    sub->add_flag("--quiet", o.quiet, "No progress output");
  };
  auto single = [&](CLI::App* sub) {
    sub->add_option("--theta-deg", o.theta_deg, "Preparation angle in degrees")->capture_default_str();
    sub->add_option("--coupling-seed", o.coupling_seed, "Coupling seed (default derived from --seed)");
    sub->add_option("--lanczos-seed", o.lanczos_seed, "Lanczos start seed (default derived from --seed)");
  };

  CLI::App* run = app.add_subcommand("run", "Single measurement: trajectory.csv and summary.json");
  common(run);
  single(run);
  CLI::App* ens = app.add_subcommand("ensemble", "Born-rule ensemble: ensemble.json");
  common(ens);
  ens->add_flag("--keep-trajectories", o.keep_trajectories, "Also write every run's trajectory");
  CLI::App* val = app.add_subcommand("validate", "Invariant and oracle checks: validate.json");
  common(val);
  CLI::App* orc = app.add_subcommand("oracle", "Matrix-free against dense propagation (at most 12 sites)");
  common(orc);
  single(orc);

  CLI11_PARSE(app, argc, argv);

  try {
    const CommandContext ctx = make_context(o);
    if (run->parsed()) {
      const auto summary = cmd_run(ctx, o.theta_deg, seeds_for(o, ctx));
      std::cout << summary["outcome"].dump() << '\n';
    } else if (ens->parsed()) {
      cmd_ensemble(ctx, o.keep_trajectories);
      std::cout << (ctx.out_dir / "ensemble.json").string() << '\n';
    } else if (val->parsed()) {
      const ValidationReport rep = cmd_validate(ctx);
      std::cout << (rep.passed() ? "all checks passed" : "validation FAILED") << '\n';
      return rep.passed() ? kExitOk : kExitInvariant;
    } else if (orc->parsed()) {
      const OracleReport rep = cmd_oracle(ctx, o.theta_deg, seeds_for(o, ctx));
      std::cout << rep.to_json().dump() << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    std::cerr << "solver error: " << e.what() << " (best residual " << e.best_residual() << ")\n";
    return kExitSolver;
  } catch (const IntegrityError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
