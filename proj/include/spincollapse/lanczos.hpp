#pragma once

#include <cstdint>

#include "spincollapse/chebyshev.hpp"
#include "spincollapse/hilbert.hpp"

namespace spincollapse {

enum class Reorthogonalization { Full, None };

struct LanczosConfig {
  int max_iterations = 3000;  // total operator applications across restarts
  double residual_tolerance = 1e-8;
  Reorthogonalization reorthogonalization = Reorthogonalization::Full;
  std::uint64_t start_seed = 1;
  int krylov_dim = 100;  // basis size before restarting from the current Ritz vector
};

struct GroundState {
  double energy = 0.0;
  StateVector state;
  double residual = 0.0;  // ||H v - E v||
  int iterations = 0;
};

// Random complex start vector with components uniform in the unit square,
// normalized; a pure function of the seed.
StateVector random_state(Eigen::Index dim, std::uint64_t seed);

// Lowest Ritz pair of a Hermitian operator. Throws ConvergenceError carrying
// the best residual when max_iterations is exhausted.
GroundState lanczos_ground_state(const LinearOperator& apply_h, Eigen::Index dim,
                                 const LanczosConfig& cfg);

}  // namespace spincollapse
