#include "spincollapse/model.hpp"

#include <omp.h>

#include <bit>
#include <cmath>
#include <string>

#include "spincollapse/errors.hpp"
#include "spincollapse/parallel.hpp"
#include "spincollapse/rng.hpp"

namespace spincollapse {

Geometry Geometry::for_apparatus(int n_apparatus) {
  Geometry g;
  if (n_apparatus == 4) {
    g.kind = GeometryKind::Rectangle4;
  } else if (n_apparatus == 8) {
    g.kind = GeometryKind::Cube8;
  } else {
    throw ConfigError("unsupported apparatus size " + std::to_string(n_apparatus) +
                          " (expected 4 or 8)",
                      "model.N_A");
  }
  g.n_apparatus = n_apparatus;
  auto vertex = [](int k) { return k ^ (k >> 1); };
  for (int i = 0; i < n_apparatus; ++i) {
    for (int j = i + 1; j < n_apparatus; ++j) {
      const int hamming = std::popcount(static_cast<unsigned>(vertex(i) ^ vertex(j)));
      if (hamming == 1) g.nn_pairs.emplace_back(i, j);
      if (hamming == 2) g.nnn_pairs.emplace_back(i, j);
    }
  }
  return g;
}

namespace {

AxisTriple draw_triple(UniformStream& rng, double half_width) {
  AxisTriple t;
  t.x = rng.symmetric(half_width);
  t.y = rng.symmetric(half_width);
  t.z = rng.symmetric(half_width);
  return t;
}

void check_model(const ModelConfig& m) {
  Geometry::for_apparatus(m.n_apparatus);
  if (m.n_environment < 1) throw ConfigError("must be >= 1", "model.N_E");
  if (!(m.gamma >= 0.0 && m.gamma <= 1.0)) throw ConfigError("must lie in [0, 1]", "model.gamma");
  if (!(m.delta >= 0.0)) throw ConfigError("must be >= 0", "model.Delta");
  if (!(m.omega >= 0.0)) throw ConfigError("must be >= 0", "model.Omega");
  if (!(m.theta >= 0.0)) throw ConfigError("must be >= 0", "model.Theta");
  if (!(m.mu >= 0.0)) throw ConfigError("must be >= 0", "model.mu");
}

}  // namespace

CouplingSet build_couplings(const ModelConfig& config, std::uint64_t seed) {
  check_model(config);
  CouplingSet c;
  c.config = config;
  c.geometry = Geometry::for_apparatus(config.n_apparatus);
  c.seed = seed;
  const int na = config.n_apparatus, ne = config.n_environment;
  const double j = config.exchange;

  for (auto [a, b] : c.geometry.nn_pairs)
    c.apparatus.push_back({a, b, {config.gamma * j, config.gamma * j, j}});
  const double jd = j / std::sqrt(2.0);
  for (auto [a, b] : c.geometry.nnn_pairs)
    c.apparatus.push_back({a, b, {config.gamma * jd, config.gamma * jd, jd}});

  UniformStream ae(derive_seed(seed, {static_cast<std::uint64_t>(CouplingFamily::AppEnv)}));
  for (int a = 0; a < na; ++a)
    for (int e = 0; e < ne; ++e) c.app_env.push_back({a, e, draw_triple(ae, config.delta)});

  UniformStream ee(derive_seed(seed, {static_cast<std::uint64_t>(CouplingFamily::Environment)}));
  for (int a = 0; a < ne; ++a)
    for (int b = a + 1; b < ne; ++b) c.environment.push_back({a, b, draw_triple(ee, config.omega)});

  UniformStream se(derive_seed(seed, {static_cast<std::uint64_t>(CouplingFamily::SysEnv)}));
  for (int e = 0; e < ne; ++e) c.sys_env.push_back(draw_triple(se, config.theta));

  c.sys_app.assign(static_cast<std::size_t>(na), 1.0);
  return c;
}

std::vector<PairCoupling> apparatus_pairs(const CouplingSet& c) {
  const SiteLayout l = c.layout();
  std::vector<PairCoupling> out;
  for (const auto& b : c.apparatus)
    out.push_back({l.apparatus(b.i).index, l.apparatus(b.j).index, -b.coupling.x, -b.coupling.y,
                   -b.coupling.z});
  return out;
}

std::vector<PairCoupling> environment_pairs(const CouplingSet& c) {
  std::vector<PairCoupling> out;
  for (const auto& b : c.environment)
    out.push_back({b.i, b.j, b.coupling.x, b.coupling.y, b.coupling.z});
  return out;
}

std::vector<PairCoupling> linear_pairs(const CouplingSet& c) {
  const SiteLayout l = c.layout();
  std::vector<PairCoupling> out = apparatus_pairs(c);
  for (const auto& b : c.environment)
    out.push_back({l.environment(b.i).index, l.environment(b.j).index, b.coupling.x, b.coupling.y,
                   b.coupling.z});
  for (const auto& b : c.app_env)
    out.push_back({l.apparatus(b.i).index, l.environment(b.j).index, b.coupling.x, b.coupling.y,
                   b.coupling.z});
  for (std::size_t e = 0; e < c.sys_env.size(); ++e) {
    const auto& t = c.sys_env[e];
    out.push_back({0, l.environment(static_cast<int>(e)).index, t.x, t.y, t.z});
  }
  for (std::size_t a = 0; a < c.sys_app.size(); ++a)
    out.push_back({0, l.apparatus(static_cast<int>(a)).index, 0.0, 0.0, c.sys_app[a]});
  return out;
}

Hamiltonian::Hamiltonian(const CouplingSet& c)
    : couplings_(c),
      layout_(c.layout()),
      linear_(layout_.num_sites(), linear_pairs(c)),
      apparatus_(layout_.num_sites(), apparatus_pairs(c)) {}

void Hamiltonian::apply_frozen(FieldValue field, const StateVector& psi, StateVector& out) const {
  linear_.apply(psi, out, -couplings_.mu() * field.b_tilde, layout_.apparatus_mask());
}

StateVector apply_linear_hamiltonian(const Hamiltonian& h, const StateVector& psi) {
  return h.linear().apply(psi);
}

StateVector apply_linear_hamiltonian(const CouplingSet& c, const StateVector& psi) {
  const SiteLayout l = c.layout();
  if (psi.size() != static_cast<Eigen::Index>(l.dimension()))
    throw UsageError("state vector dimension mismatch");
  return PairHamiltonian(l.num_sites(), linear_pairs(c)).apply(psi);
}

FieldValue magnetization_field(const StateVector& psi, const SiteLayout& layout) {
  if (psi.size() != static_cast<Eigen::Index>(layout.dimension()))
    throw UsageError("state vector dimension mismatch");
  // <psi|M psi> with M diagonal: sum_b |psi_b|^2 (n_up(b) - N_A/2).
  const BasisState mask = layout.apparatus_mask();
  const double offset = 0.5 * layout.num_apparatus();
  constexpr Eigen::Index chunk = 4096;
  const Eigen::Index n = psi.size();
  const Eigen::Index chunks = (n + chunk - 1) / chunk;
  std::vector<double> partial(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(static) num_threads(worker_threads()) if (n >= Eigen::Index(kParallelThreshold) && !omp_in_parallel())
  for (Eigen::Index c = 0; c < chunks; ++c) {
    double s = 0.0;
    const Eigen::Index hi = std::min(n, (c + 1) * chunk);
    for (Eigen::Index b = c * chunk; b < hi; ++b)
      s += std::norm(psi[b]) * (std::popcount(static_cast<BasisState>(b) & mask) - offset);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return {total};
}

FieldValue magnetization_field(const StateVector& psi, const CouplingSet& c) {
  return magnetization_field(psi, c.layout());
}

StateVector apply_nonlinear_term(const CouplingSet& c, FieldValue field, const StateVector& psi) {
  const SiteLayout l = c.layout();
  if (psi.size() != static_cast<Eigen::Index>(l.dimension()))
    throw UsageError("state vector dimension mismatch");
  const BasisState mask = l.apparatus_mask();
  const double offset = 0.5 * l.num_apparatus();
  const double k = -c.mu() * field.b_tilde;
  StateVector out(psi.size());
  for (Eigen::Index b = 0; b < psi.size(); ++b)
    out[b] = k * (std::popcount(static_cast<BasisState>(b) & mask) - offset) * psi[b];
  return out;
}

double degeneracy_split(double mu, int n_a) {
  if (n_a < 1) throw UsageError("apparatus size must be >= 1");
  return mu * n_a * n_a / 4.0;
}

namespace {

double linear_bound(const CouplingSet& c) {
  double r = 0.0;
  auto add = [&r](const AxisTriple& t) {
    r += 0.25 * (std::abs(t.x) + std::abs(t.y) + std::abs(t.z));
  };
  for (const auto& b : c.apparatus) add(b.coupling);
  for (const auto& b : c.environment) add(b.coupling);
  for (const auto& b : c.app_env) add(b.coupling);
  for (const auto& t : c.sys_env) add(t);
  for (double g : c.sys_app) r += 0.25 * std::abs(g);
  return r;
}

}  // namespace

double spectral_bound(const CouplingSet& c, double field_cap) {
  return linear_bound(c) + c.mu() * std::abs(field_cap) * 0.5 * c.config.n_apparatus;
}

double spectral_bound(const Hamiltonian& h, double field_cap) {
  return h.linear().norm_bound() +
         h.couplings().mu() * std::abs(field_cap) * 0.5 * h.layout().num_apparatus();
}

}  // namespace spincollapse
