#include "spincollapse/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace spincollapse {

using nlohmann::json;

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

json convention_notes() {
  return {
      {"basis", "bit b of a basis index is site b, set means spin up; site 0 is the system spin, "
                "sites 1..N_A the apparatus, the remaining sites the environment"},
      {"spin_y", "S^y = (S^+ - S^-) / (2i)"},
      {"pair_sums", "every double sum runs over unordered pairs i<j counted once"},
      {"apparatus", "H_A = -sum J_ij^a S_i^a S_j^a with J^z = J on edges, J/sqrt(2) on face "
                    "diagonals, J^x = J^y = gamma J^z; site k at hypercube vertex k^(k>>1)"},
      {"random_couplings", "Omega, Delta, Theta components drawn independently per axis, uniform "
                           "in [-X, X]; H_SA coupling Gamma = 1"},
      {"nonlinear_term", "H_B = -mu <M> M with M = sum of apparatus S^z"},
      {"universe_energy", "E_U = <H_linear> - mu B^2 / 2"},
      {"exchange_energy", "E_exch = <H_A> with the anisotropic weights J_ij^a"},
      {"propagator", "forward evolution exp(-i H dt), Chebyshev expansion with Bessel coefficients"},
      {"field_scheme", "midpoint: the field is held at B_mid = (B(t) + B(t+dt)) / 2 solved "
                       "self-consistently; step_start: the field is frozen at B(t)"},
      {"rng", "mt19937_64 with 53-bit doubles; substream seeds via SplitMix64 chaining"},
      {"seeds", "coupling family f uses derive_seed(coupling_seed, {f}) with AppEnv=1, "
                "Environment=2, SysEnv=3; ensemble run r at grid index k uses "
                "derive_seed(base_seed, {k, r, 0}) for couplings and {k, r, 1} for Lanczos"},
  };
}

std::string trajectory_csv(const std::vector<ObservableRecord>& rows, const json& metadata) {
  std::ostringstream os;
  std::istringstream meta(metadata.dump(2));
  for (std::string line; std::getline(meta, line);) os << "# " << line << '\n';
  os << kTrajectoryHeader << '\n';
  for (const auto& r : rows) {
    os << format_number(r.t) << ',' << format_number(r.M) << ',' << format_number(r.E_exch) << ','
       << format_number(r.S_sys_z) << ',' << format_number(r.b_tilde) << ','
       << format_number(r.norm) << ',' << format_number(r.E_U) << '\n';
  }
  return os.str();
}

std::vector<ObservableRecord> parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::vector<ObservableRecord> rows;
  bool header = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kTrajectoryHeader) throw std::runtime_error("unexpected trajectory header: " + line);
      header = true;
      continue;
    }
    double v[7];
    std::istringstream ls(line);
    std::string cell;
    for (int k = 0; k < 7; ++k) {
      if (!std::getline(ls, cell, ',')) throw std::runtime_error("short trajectory row: " + line);
      std::size_t used = 0;
      v[k] = std::stod(cell, &used);
      if (used != cell.size()) throw std::runtime_error("bad number in trajectory row: " + line);
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], 0.0});
  }
  if (!header) throw std::runtime_error("trajectory header missing");
  return rows;
}

json outcome_json(const RunOutcome& o) {
  return {
      {"classification", to_string(o.classification)},
      {"collapse_time", o.collapse_time ? json(*o.collapse_time) : json(nullptr)},
      {"final_M", o.final_M},
      {"final_S_sys_z", o.final_S_sys_z},
  };
}

json born_curve_json(const BornCurve& curve) {
  json points = json::array();
  for (const BornPoint& pt : curve.points) {
    json runs = json::array();
    double wall = 0.0, wall_max = 0.0;
    for (const EnsembleRun& r : pt.runs) {
      json jr = {{"coupling_seed", r.coupling_seed},
                 {"lanczos_seed", r.lanczos_seed},
                 {"wall_seconds", r.wall_seconds},
                 {"matvecs", r.matvecs}};
      if (r.outcome) jr["outcome"] = outcome_json(*r.outcome);
      else jr["error"] = r.error;
      runs.push_back(jr);
      wall += r.wall_seconds;
      wall_max = std::max(wall_max, r.wall_seconds);
    }
    points.push_back({
        {"theta_deg", pt.theta * 180.0 / std::numbers::pi},
        {"n_runs", pt.n_runs},
        {"n_up", pt.n_up},
        {"n_down", pt.n_down},
        {"n_undecided", pt.n_undecided},
        {"n_failed", pt.n_failed},
        {"p_up", std::isnan(pt.p_up) ? json(nullptr) : json(pt.p_up)},
        {"ci95", {pt.interval.low, pt.interval.high}},
        {"reference_cos2", pt.reference},
        {"wall_seconds_total", wall},
        {"wall_seconds_max", wall_max},
        {"runs", runs},
    });
  }
  return {{"base_seed", curve.base_seed}, {"points", points}};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace spincollapse
