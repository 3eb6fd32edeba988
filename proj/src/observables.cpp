#include "spincollapse/observables.hpp"

#include <vector>

#include "spincollapse/errors.hpp"

namespace spincollapse {

double magnetization(const StateVector& psi, const SiteLayout& layout) {
  if (psi.size() != static_cast<Eigen::Index>(layout.dimension()))
    throw UsageError("state vector dimension mismatch");
  const int na = layout.num_apparatus();
  std::vector<double> up(static_cast<std::size_t>(na), 0.0);
  double total = 0.0;
  for (Eigen::Index b = 0; b < psi.size(); ++b) {
    const double p = std::norm(psi[b]);
    total += p;
    for (int k = 0; k < na; ++k)
      if (spin_up(static_cast<BasisState>(b), 1 + k)) up[static_cast<std::size_t>(k)] += p;
  }
  // <S_k^z> = P(up) - total / 2
  double m = 0.0;
  for (double u : up) m += u - 0.5 * total;
  return m;
}

double magnetization(const StateVector& psi, const CouplingSet& c) {
  return magnetization(psi, c.layout());
}

double exchange_energy(const Hamiltonian& h, const StateVector& psi) {
  return h.apparatus().expectation(psi);
}

double exchange_energy(const CouplingSet& c, const StateVector& psi) {
  const SiteLayout l = c.layout();
  return PairHamiltonian(l.num_sites(), apparatus_pairs(c)).expectation(psi);
}

double system_spin_z(const StateVector& psi) {
  num_sites(psi);
  double s = 0.0;
  for (Eigen::Index b = 0; b < psi.size(); ++b)
    s += (b & 1) ? 0.5 * std::norm(psi[b]) : -0.5 * std::norm(psi[b]);
  return s;
}

double universe_energy(const Hamiltonian& h, const StateVector& psi) {
  const double b = magnetization_field(psi, h.layout()).b_tilde;
  return h.linear().expectation(psi) - 0.5 * h.couplings().mu() * b * b;
}

double universe_energy(const CouplingSet& c, const StateVector& psi) {
  return universe_energy(Hamiltonian(c), psi);
}

ObservableRecord observe(const Hamiltonian& h, const StateVector& psi, double t) {
  ObservableRecord r;
  r.t = t;
  r.M = magnetization(psi, h.layout());
  r.b_tilde = magnetization_field(psi, h.layout()).b_tilde;
  r.E_exch = exchange_energy(h, psi);
  r.S_sys_z = system_spin_z(psi);
  r.norm = norm(psi);
  const double lin = h.linear().expectation(psi);
  const double mu = h.couplings().mu();
  r.E_U = lin - 0.5 * mu * r.b_tilde * r.b_tilde;
  r.H_mean = lin - mu * r.b_tilde * r.b_tilde;
  return r;
}

}  // namespace spincollapse
