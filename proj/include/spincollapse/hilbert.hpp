#pragma once

// Computational basis for a register of spin-1/2 sites and matrix-free
// single- and two-site spin operators.
//
// Site b is encoded in bit b of the basis index; a set bit means spin up
// along z. Site 0 is the measured system spin, sites 1..N_A form the
// apparatus and the remaining sites the environment.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace spincollapse {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using BasisState = std::uint64_t;

enum class Subsystem { System, Apparatus, Environment };
enum class Axis { X, Y, Z };

struct SiteIndex {
  int index = 0;
  Subsystem subsystem = Subsystem::System;
};

class SiteLayout {
 public:
  SiteLayout(int n_apparatus, int n_environment);

  int num_sites() const { return 1 + n_app_ + n_env_; }
  int num_apparatus() const { return n_app_; }
  int num_environment() const { return n_env_; }
  BasisState dimension() const { return BasisState{1} << num_sites(); }

  SiteIndex system() const { return {0, Subsystem::System}; }
  SiteIndex apparatus(int k) const;
  SiteIndex environment(int k) const;
  // Total map from a raw index to its subsystem.
  SiteIndex site(int index) const;

  BasisState apparatus_mask() const { return ((BasisState{1} << n_app_) - 1) << 1; }
  BasisState environment_mask() const {
    return ((BasisState{1} << n_env_) - 1) << (1 + n_app_);
  }

 private:
  int n_app_;
  int n_env_;
};

// Number of sites encoded by a state vector; throws UsageError unless the
// length is a power of two.
int num_sites(const StateVector& psi);

StateVector basis_state(int n_sites, BasisState bits);

inline bool spin_up(BasisState b, int site) { return (b >> site) & 1U; }

// Single-site operators. All operator applications are pure: the input is
// never modified.
StateVector apply_sz(SiteIndex site, const StateVector& psi);
StateVector apply_sx(SiteIndex site, const StateVector& psi);
// S^y = (S^+ - S^-) / 2i with S^+|dn> = |up>, so S^y|up> = (i/2)|dn>.
StateVector apply_sy(SiteIndex site, const StateVector& psi);
StateVector apply_spin(Axis axis, SiteIndex site, const StateVector& psi);

// acc += coupling * S_i^a S_j^a psi
void apply_two_site(Axis axis, SiteIndex i, SiteIndex j, double coupling, const StateVector& psi,
                    StateVector& acc);

// Conjugate-linear in the first argument.
Complex inner(const StateVector& psi, const StateVector& phi);
double norm(const StateVector& psi);
// a * psi + phi
StateVector axpy(Complex a, const StateVector& psi, const StateVector& phi);
StateVector scale(Complex a, const StateVector& psi);

// Product state in the fixed site layout: system is site 0, the apparatus
// factor occupies the next log2(dim(app)) sites, the environment the rest.
StateVector tensor_product(const StateVector& sys, const StateVector& app, const StateVector& env);

// Flips every spin: psi'[b] = psi[~b].
StateVector global_spin_flip(const StateVector& psi);

}  // namespace spincollapse
