#pragma once

// Chebyshev expansion of the short-time propagator
//
//   exp(-i dt H) = J_0(x) + 2 sum_{k>=1} (-i)^k J_k(x) T_k(H / R),   x = R dt,
//
// for Hermitian H with spectrum inside [-R, R]. T_k(H/R) psi is built with
// the three-term recurrence T_{k+1} = 2 (H/R) T_k - T_{k-1}.

#include <functional>
#include <vector>

#include "spincollapse/hilbert.hpp"
#include "spincollapse/model.hpp"

namespace spincollapse {

struct ChebyshevConfig {
  double truncation_tolerance = 1e-15;
  int max_order = 4096;
};

// out = H psi
using LinearOperator = std::function<void(const StateVector&, StateVector&)>;

// Smallest order K > x with |J_k(x)| below the tolerance for k = K, K + 1.
// Throws ConfigError when K would exceed max_order.
int chebyshev_order(double x, const ChebyshevConfig& cfg);

// c_0 = J_0(x), c_k = 2 (-i)^k J_k(x) for k = 1..order.
std::vector<Complex> chebyshev_coefficients(double x, int order);

// Reusable workspace for repeated propagation of same-sized vectors.
class ChebyshevPropagator {
 public:
  explicit ChebyshevPropagator(ChebyshevConfig cfg = {}) : cfg_(cfg) {}

  // exp(-i dt H) psi for ||H|| <= bound. Returns the order used.
  int propagate(const LinearOperator& apply_h, double bound, const StateVector& psi, double dt,
                StateVector& out);

  const ChebyshevConfig& config() const { return cfg_; }
  long matvecs() const { return matvecs_; }

 private:
  ChebyshevConfig cfg_;
  StateVector prev_, cur_, next_;
  long matvecs_ = 0;
};

// exp(-i dt (H_linear + H_B(frozen))) psi with the field held fixed.
StateVector chebyshev_step(const Hamiltonian& h, FieldValue frozen_field, const StateVector& psi,
                           double dt, const ChebyshevConfig& cfg);
StateVector chebyshev_step(const CouplingSet& c, FieldValue frozen_field, const StateVector& psi,
                           double dt, const ChebyshevConfig& cfg);

}  // namespace spincollapse
