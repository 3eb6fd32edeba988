#pragma once
// Brute-force reference built from Kronecker products of 2x2 spin matrices.
// Shares no code with the bitmask kernels: site 0 is the rightmost factor,
// which reproduces the same basis ordering independently.

#include <Eigen/Dense>

#include "spincollapse/evolve.hpp"
#include "spincollapse/model.hpp"

namespace spincollapse {

// Largest universe the oracle accepts.
inline constexpr int kMaxOracleSites = 12;

using DenseMatrix = Eigen::MatrixXcd;

// S^axis on one site of an n_sites universe.
DenseMatrix dense_spin_operator(int n_sites, int site, Axis axis);

// Dense H_linear assembled from the bonds of c. Throws UsageError beyond
// kMaxOracleSites.
DenseMatrix dense_linear_hamiltonian(const CouplingSet& c);
DenseMatrix dense_apparatus_hamiltonian(const CouplingSet& c);
DenseMatrix dense_environment_hamiltonian(const CouplingSet& c);
// sum_{i in A} S_i^z
DenseMatrix dense_magnetization_operator(const CouplingSet& c);

double dense_ground_energy(const DenseMatrix& h);

// exp(-i dt H) for Hermitian H through its eigendecomposition.
class DensePropagator {
 public:
  DensePropagator(const DenseMatrix& h, double dt);
  StateVector apply(const StateVector& psi) const { return u_ * psi; }
  const DenseMatrix& matrix() const { return u_; }

 private:
  DenseMatrix u_;
};

struct DenseTrajectory {
  std::vector<double> t;
  std::vector<StateVector> states;  // at every recorded step
};

// Dense counterpart of evolve with the same field scheme, record stride and
// step count. States are stored instead of observables.
DenseTrajectory dense_evolve(const CouplingSet& c, const StateVector& psi0,
                             const TrajectoryConfig& traj);

}  // namespace spincollapse
