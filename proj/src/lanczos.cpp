#include "spincollapse/lanczos.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "spincollapse/errors.hpp"
#include "spincollapse/rng.hpp"

namespace spincollapse {

StateVector random_state(Eigen::Index dim, std::uint64_t seed) {
  UniformStream rng(derive_seed(seed, {0x4C414E43ULL}));
  StateVector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double re = rng.symmetric(1.0);
    const double im = rng.symmetric(1.0);
    v[k] = {re, im};
  }
  return v / norm(v);
}

GroundState lanczos_ground_state(const LinearOperator& apply_h, Eigen::Index dim,
                                 const LanczosConfig& cfg) {
  if (dim < 2) throw UsageError("Lanczos needs dimension >= 2");
  if (cfg.max_iterations < 1 || !(cfg.residual_tolerance > 0.0))
    throw ConfigError("invalid Lanczos configuration", "lanczos");
  const int m_max = static_cast<int>(std::min<Eigen::Index>(std::max(cfg.krylov_dim, 2), dim));
  const bool full = cfg.reorthogonalization == Reorthogonalization::Full;

  StateVector start = random_state(dim, cfg.start_seed);
  Eigen::MatrixXcd basis(dim, full ? m_max : 2);
  StateVector w(dim), prev(dim), cur(dim);
  StateVector ritz(dim);
  std::vector<double> alpha, beta;

  GroundState best;
  best.residual = std::numeric_limits<double>::infinity();
  int used = 0;

  while (used < cfg.max_iterations) {
    alpha.clear();
    beta.clear();
    cur = start;
    prev.setZero();
    ritz.setZero();
    // Without reorthogonalization only two vectors are kept and the Ritz
    // vector is rebuilt by a second pass over the same recurrence.
    auto run_recurrence = [&](const Eigen::VectorXd* coeffs) {
      cur = start;
      prev.setZero();
      double b_prev = 0.0;
      int m = 0;
      for (; m < m_max && used < cfg.max_iterations; ++m) {
        if (full) basis.col(m) = cur;
        if (coeffs) ritz += (*coeffs)[m] * cur;
        if (coeffs && m + 1 == coeffs->size()) return m + 1;
        apply_h(cur, w);
        if (!coeffs) ++used;
        const double a = inner(cur, w).real();
        w -= a * cur + b_prev * prev;
        if (full) {
          // Two passes of classical Gram-Schmidt against the whole basis.
          for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXcd proj = basis.leftCols(m + 1).adjoint() * w;
            w.noalias() -= basis.leftCols(m + 1) * proj;
          }
        }
        const double b = norm(w);
        if (!coeffs) {
          alpha.push_back(a);
        }
        if (b < 1e-14 * std::max(1.0, std::abs(a))) return m + 1;  // invariant subspace
        if (!coeffs) beta.push_back(b);
        prev = cur;
        cur = w / b;
        b_prev = b;
      }
      return m;
    };

    const int m = run_recurrence(nullptr);
    if (m == 0) break;
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub(std::max(m - 1, 0));
    for (int k = 0; k + 1 < m; ++k) sub[k] = beta[static_cast<std::size_t>(k)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::VectorXd y = tri.eigenvectors().col(0);
    const double theta = tri.eigenvalues()[0];

    if (full) {
      ritz = basis.leftCols(m) * y.cast<Complex>();
    } else {
      run_recurrence(&y);
    }
    ritz /= norm(ritz);
    apply_h(ritz, w);
    ++used;
    const double residual = norm(w - theta * ritz);
    if (residual < best.residual) {
      best.energy = theta;
      best.state = ritz;
      best.residual = residual;
    }
    best.iterations = used;
    if (residual <= cfg.residual_tolerance) return best;
    start = ritz;
  }
  throw ConvergenceError("Lanczos did not converge in " + std::to_string(cfg.max_iterations) +
                             " iterations (best residual " + std::to_string(best.residual) + ")",
                         best.residual);
}

}  // namespace spincollapse
