#include "spincollapse/chebyshev.hpp"

#include <omp.h>

#include <cmath>
#include <string>

#include "spincollapse/errors.hpp"
#include "spincollapse/parallel.hpp"

namespace spincollapse {

namespace {

double bessel_j(int k, double x) { return x == 0.0 ? (k == 0 ? 1.0 : 0.0) : std::cyl_bessel_j(k, x); }

}  // namespace

int chebyshev_order(double x, const ChebyshevConfig& cfg) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError("Chebyshev argument must be finite");
  int k = static_cast<int>(std::floor(x)) + 1;
  while (std::abs(bessel_j(k, x)) >= cfg.truncation_tolerance ||
         std::abs(bessel_j(k + 1, x)) >= cfg.truncation_tolerance) {
    ++k;
    if (k > cfg.max_order)
      throw ConfigError("Chebyshev order exceeds max_order " + std::to_string(cfg.max_order) +
                            " at R*dt = " + std::to_string(x) + "; use a smaller dt",
                        "chebyshev.max_order");
  }
  return k;
}

std::vector<Complex> chebyshev_coefficients(double x, int order) {
  std::vector<Complex> c(static_cast<std::size_t>(order) + 1);
  const Complex phase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  c[0] = bessel_j(0, x);
  for (int k = 1; k <= order; ++k) c[static_cast<std::size_t>(k)] = 2.0 * phase[k % 4] * bessel_j(k, x);
  return c;
}

int ChebyshevPropagator::propagate(const LinearOperator& apply_h, double bound,
                                   const StateVector& psi, double dt, StateVector& out) {
  if (!(dt >= 0.0)) throw UsageError("time step must be non-negative");
  if (bound <= 0.0 || dt == 0.0) {
    out = psi;
    return 0;
  }
  const double x = bound * dt;
  const int order = chebyshev_order(x, cfg_);
  const auto c = chebyshev_coefficients(x, order);
  const double inv_r = 1.0 / bound;

  prev_ = psi;
  apply_h(prev_, cur_);
  ++matvecs_;
  cur_ *= inv_r;
  out = c[0] * prev_ + c[1] * cur_;
  for (int k = 2; k <= order; ++k) {
    apply_h(cur_, next_);
    ++matvecs_;
    const Complex ck = c[static_cast<std::size_t>(k)];
    const Eigen::Index n = psi.size();
    Complex* nx = next_.data();
    const Complex* pv = prev_.data();
    Complex* o = out.data();
#pragma omp parallel for schedule(static) num_threads(worker_threads()) if (n >= Eigen::Index(kParallelThreshold) && !omp_in_parallel())
    for (Eigen::Index b = 0; b < n; ++b) {
      nx[b] = 2.0 * inv_r * nx[b] - pv[b];
      o[b] += ck * nx[b];
    }
    std::swap(prev_, cur_);
    std::swap(cur_, next_);
  }
  return order;
}

StateVector chebyshev_step(const Hamiltonian& h, FieldValue frozen_field, const StateVector& psi,
                           double dt, const ChebyshevConfig& cfg) {
  if (psi.size() != h.dimension()) throw UsageError("state vector dimension mismatch");
  ChebyshevPropagator prop(cfg);
  StateVector out;
  prop.propagate([&](const StateVector& v, StateVector& w) { h.apply_frozen(frozen_field, v, w); },
                 spectral_bound(h, frozen_field.b_tilde), psi, dt, out);
  return out;
}

StateVector chebyshev_step(const CouplingSet& c, FieldValue frozen_field, const StateVector& psi,
                           double dt, const ChebyshevConfig& cfg) {
  return chebyshev_step(Hamiltonian(c), frozen_field, psi, dt, cfg);
}

}  // namespace spincollapse
