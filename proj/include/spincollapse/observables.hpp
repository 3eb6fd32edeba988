#pragma once

#include "spincollapse/model.hpp"

namespace spincollapse {

struct ObservableRecord {
  double t = 0.0;
  double M = 0.0;        // sum_{i in A} <S_i^z>
  double E_exch = 0.0;   // -sum_{i<j in A} sum_a J_ij^a <S_i^a S_j^a>
  double S_sys_z = 0.0;  // <S_sys^z>
  double b_tilde = 0.0;  // field functional; equals M, computed on a separate path
  double norm = 0.0;     // sqrt(<psi|psi>)
  double E_U = 0.0;      // <H_linear> - mu b^2 / 2, the conserved energy
  double H_mean = 0.0;   // <H_linear + H_B> = <H_linear> - mu b^2, not conserved
};

// Per-site accumulation of <S_i^z> over the apparatus.
double magnetization(const StateVector& psi, const SiteLayout& layout);
double magnetization(const StateVector& psi, const CouplingSet& c);

// Uses the anisotropic apparatus couplings J_ij^a of the model for each
// component, i.e. E_exch = <H_A>.
double exchange_energy(const Hamiltonian& h, const StateVector& psi);
double exchange_energy(const CouplingSet& c, const StateVector& psi);

double system_spin_z(const StateVector& psi);

// E_U = <psi|H - H_B/2|psi> with H_B evaluated at the state's own field,
// i.e. <H_linear> - mu b^2 / 2.
double universe_energy(const Hamiltonian& h, const StateVector& psi);
double universe_energy(const CouplingSet& c, const StateVector& psi);

ObservableRecord observe(const Hamiltonian& h, const StateVector& psi, double t);

}  // namespace spincollapse
