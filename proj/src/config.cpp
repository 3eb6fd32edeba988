#include "spincollapse/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "spincollapse/errors.hpp"

namespace spincollapse {

using nlohmann::json;

namespace {

// Reads typed values from one section and tracks which keys were consumed.
class Section {
 public:
  Section(const json& doc, std::string name) : name_(std::move(name)) {
    if (!doc.contains(name_)) return;
    node_ = &doc.at(name_);
    if (!node_->is_object()) throw ConfigError("section must be an object", name_);
  }

  bool has(const std::string& key) const { return node_ && node_->contains(key); }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!has(key)) return;
    const json& v = node_->at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError("expected a number", path(key));
        out = v.get<double>();
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer() && !v.is_number_unsigned())
          throw ConfigError("expected an integer", path(key));
        out = v.get<T>();
      } else {
        out = v.get<T>();
      }
    } catch (const json::exception&) {
      throw ConfigError("invalid value " + v.dump(), path(key));
    }
  }

  void reject_unknown() const {
    if (!node_) return;
    for (const auto& [key, value] : node_->items())
      if (!seen_.count(key)) throw ConfigError("unknown key", path(key));
  }

  std::string path(const std::string& key) const { return name_ + "." + key; }

 private:
  std::string name_;
  const json* node_ = nullptr;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(what, key);
}

}  // namespace

RootConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be an object", "");
  static const std::set<std::string> kSections{"model", "trajectory", "chebyshev", "lanczos",
                                               "experiment"};
  for (const auto& [key, value] : doc.items())
    if (!kSections.count(key)) throw ConfigError("unknown section", key);

  RootConfig cfg;
  {
    Section s(doc, "model");
    ModelConfig& m = cfg.model;
    s.get("N_A", m.n_apparatus);
    s.get("N_E", m.n_environment);
    s.get("gamma", m.gamma);
    s.get("Delta", m.delta);
    s.get("Omega", m.omega);
    s.get("Theta", m.theta);
    require(m.n_apparatus == 4 || m.n_apparatus == 8, "model.N_A", "must be 4 or 8");
    m.mu = 48.0 / m.n_apparatus;
    s.get("mu", m.mu);
    s.reject_unknown();
    require(m.n_environment >= 1 && 1 + m.n_apparatus + m.n_environment <= 30, "model.N_E",
            "must be >= 1 with at most 30 sites in total");
    require(m.gamma >= 0.0 && m.gamma <= 1.0, "model.gamma", "must lie in [0, 1]");
    require(m.delta >= 0.0, "model.Delta", "must be >= 0");
    require(m.omega >= 0.0, "model.Omega", "must be >= 0");
    require(m.theta >= 0.0, "model.Theta", "must be >= 0");
    require(m.mu >= 0.0, "model.mu", "must be >= 0");
  }
  {
    Section s(doc, "trajectory");
    TrajectoryConfig& t = cfg.trajectory;
    s.get("dt", t.dt);
    s.get("t_max", t.t_max);
    s.get("record_stride", t.record_stride);
    s.get("norm_tolerance", t.norm_tolerance);
    s.get("energy_tolerance", t.energy_tolerance);
    std::string scheme = t.field_scheme == FieldScheme::Midpoint ? "midpoint" : "step_start";
    s.get("field_scheme", scheme);
    s.reject_unknown();
    require(t.dt > 0.0 && std::isfinite(t.dt), "trajectory.dt", "must be > 0");
    require(t.t_max >= t.dt && std::isfinite(t.t_max), "trajectory.t_max", "must be >= dt");
    require(t.record_stride >= 1, "trajectory.record_stride", "must be >= 1");
    require(t.norm_tolerance > 0.0, "trajectory.norm_tolerance", "must be > 0");
    require(t.energy_tolerance > 0.0, "trajectory.energy_tolerance", "must be > 0");
    if (scheme == "midpoint") t.field_scheme = FieldScheme::Midpoint;
    else if (scheme == "step_start") t.field_scheme = FieldScheme::StepStart;
    else throw ConfigError("must be \"midpoint\" or \"step_start\"", "trajectory.field_scheme");
  }
  {
    Section s(doc, "chebyshev");
    s.get("truncation_tolerance", cfg.chebyshev.truncation_tolerance);
    s.get("max_order", cfg.chebyshev.max_order);
    s.reject_unknown();
    require(cfg.chebyshev.truncation_tolerance > 0.0 && cfg.chebyshev.truncation_tolerance < 1.0,
            "chebyshev.truncation_tolerance", "must lie in (0, 1)");
    require(cfg.chebyshev.max_order >= 1, "chebyshev.max_order", "must be >= 1");
  }
  {
    Section s(doc, "lanczos");
    s.get("max_iterations", cfg.lanczos.max_iterations);
    s.get("residual_tolerance", cfg.lanczos.residual_tolerance);
    s.get("krylov_dim", cfg.lanczos.krylov_dim);
    s.reject_unknown();
    require(cfg.lanczos.max_iterations >= 1, "lanczos.max_iterations", "must be >= 1");
    require(cfg.lanczos.residual_tolerance > 0.0, "lanczos.residual_tolerance", "must be > 0");
    require(cfg.lanczos.krylov_dim >= 2, "lanczos.krylov_dim", "must be >= 2");
  }
  {
    Section s(doc, "experiment");
    ExperimentConfig& e = cfg.experiment;
    s.get("theta_grid_degrees", e.theta_grid_degrees);
    s.get("phi", e.phi);
    s.get("runs_per_theta", e.runs_per_theta);
    e.m_threshold = 0.25 * cfg.model.n_apparatus;
    s.get("m_threshold", e.m_threshold);
    s.get("dwell", e.dwell);
    s.get("base_seed", e.base_seed);
    s.reject_unknown();
    require(!e.theta_grid_degrees.empty(), "experiment.theta_grid_degrees", "must not be empty");
    for (double th : e.theta_grid_degrees)
      require(th >= 0.0 && th <= 90.0, "experiment.theta_grid_degrees",
              "angles must lie in [0, 90]");
    require(e.phi >= 0.0 && e.phi < 2.0 * std::numbers::pi, "experiment.phi",
            "must lie in [0, 2 pi)");
    require(e.runs_per_theta >= 1, "experiment.runs_per_theta", "must be >= 1");
    require(e.m_threshold > 0.0 && e.m_threshold <= 0.5 * cfg.model.n_apparatus,
            "experiment.m_threshold", "must lie in (0, N_A / 2]");
    require(e.dwell >= 0.0, "experiment.dwell", "must be >= 0");
  }
  return cfg;
}

json config_to_json(const RootConfig& cfg) {
  const ModelConfig& m = cfg.model;
  const TrajectoryConfig& t = cfg.trajectory;
  const ExperimentConfig& e = cfg.experiment;
  return {
      {"model",
       {{"N_A", m.n_apparatus}, {"N_E", m.n_environment}, {"gamma", m.gamma}, {"Delta", m.delta},
        {"Omega", m.omega}, {"Theta", m.theta}, {"mu", m.mu}}},
      {"trajectory",
       {{"dt", t.dt},
        {"t_max", t.t_max},
        {"record_stride", t.record_stride},
        {"norm_tolerance", t.norm_tolerance},
        {"energy_tolerance", t.energy_tolerance},
        {"field_scheme", t.field_scheme == FieldScheme::Midpoint ? "midpoint" : "step_start"}}},
      {"chebyshev",
       {{"truncation_tolerance", cfg.chebyshev.truncation_tolerance},
        {"max_order", cfg.chebyshev.max_order}}},
      {"lanczos",
       {{"max_iterations", cfg.lanczos.max_iterations},
        {"residual_tolerance", cfg.lanczos.residual_tolerance},
        {"krylov_dim", cfg.lanczos.krylov_dim}}},
      {"experiment",
       {{"theta_grid_degrees", e.theta_grid_degrees},
        {"phi", e.phi},
        {"runs_per_theta", e.runs_per_theta},
        {"m_threshold", e.m_threshold},
        {"dwell", e.dwell},
        {"base_seed", e.base_seed}}},
  };
}

json read_config_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path, "");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what(), "");
  }
}

RootConfig load_config(const std::string& path) { return config_from_json(read_config_document(path)); }

void apply_override(json& doc, const std::string& key, const std::string& value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == key.size())
    throw ConfigError("override key must have the form section.key", key);
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  doc[key.substr(0, dot)][key.substr(dot + 1)] = parsed;
}

std::pair<std::string, std::string> split_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override must have the form key=value", assignment);
  return {assignment.substr(0, eq), assignment.substr(eq + 1)};
}

RunSpec make_run_spec(const RootConfig& cfg, double theta_rad, std::uint64_t coupling_seed,
                      std::uint64_t lanczos_seed) {
  RunSpec spec;
  spec.theta = theta_rad;
  spec.phi = cfg.experiment.phi;
  spec.coupling_seed = coupling_seed;
  spec.lanczos_seed = lanczos_seed;
  spec.model = cfg.model;
  spec.trajectory = cfg.trajectory;
  spec.chebyshev = cfg.chebyshev;
  spec.lanczos = cfg.lanczos;
  spec.m_threshold = cfg.experiment.m_threshold;
  spec.dwell = cfg.experiment.dwell;
  return spec;
}

}  // namespace spincollapse
