#include "spincollapse/dense_oracle.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

#include "spincollapse/errors.hpp"

namespace spincollapse {

namespace {

Eigen::Matrix2cd spin_matrix(Axis axis) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m;
  // Rows and columns ordered (dn, up), matching bit value 0, 1.
  switch (axis) {
    case Axis::X: m << 0.0, 0.5, 0.5, 0.0; break;
    case Axis::Y: m << 0.0, 0.5i, -0.5i, 0.0; break;
    case Axis::Z: m << -0.5, 0.0, 0.0, 0.5; break;
  }
  return m;
}

void check_size(int n_sites) {
  if (n_sites < 1 || n_sites > kMaxOracleSites)
    throw UsageError("dense oracle is limited to " + std::to_string(kMaxOracleSites) + " sites");
}

int total_sites(const CouplingSet& c) {
  const int l = 1 + c.config.n_apparatus + c.config.n_environment;
  check_size(l);
  return l;
}

// Adds w S_i^a S_j^a column by column: the product of the two 2x2 factors
// with identity elsewhere.
void add_pair_operator(DenseMatrix& h, int i, int j, Axis axis, double w) {
  const Eigen::Matrix2cd m = spin_matrix(axis);
  const Eigen::Index bi = Eigen::Index{1} << i, bj = Eigen::Index{1} << j;
  for (Eigen::Index y = 0; y < h.cols(); ++y) {
    const int yi = (y & bi) ? 1 : 0, yj = (y & bj) ? 1 : 0;
    for (int ri = 0; ri < 2; ++ri) {
      for (int rj = 0; rj < 2; ++rj) {
        const Complex v = m(ri, yi) * m(rj, yj);
        if (v == Complex(0.0)) continue;
        const Eigen::Index x = (y & ~(bi | bj)) | (ri ? bi : 0) | (rj ? bj : 0);
        h(x, y) += w * v;
      }
    }
  }
}

void add_bond(DenseMatrix& h, int i, int j, const AxisTriple& k, double sign) {
  const double w[3] = {k.x, k.y, k.z};
  const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
  for (int a = 0; a < 3; ++a) {
    if (w[a] == 0.0) continue;
    add_pair_operator(h, i, j, axes[a], sign * w[a]);
  }
}

}  // namespace

DenseMatrix dense_spin_operator(int n_sites, int site, Axis axis) {
  check_size(n_sites);
  if (site < 0 || site >= n_sites) throw UsageError("site index out of range");
  DenseMatrix out = DenseMatrix::Identity(1, 1);
  for (int s = n_sites - 1; s >= 0; --s) {
    const DenseMatrix f = s == site ? DenseMatrix(spin_matrix(axis)) : DenseMatrix::Identity(2, 2);
    out = Eigen::kroneckerProduct(out, f).eval();
  }
  return out;
}

DenseMatrix dense_apparatus_hamiltonian(const CouplingSet& c) {
  const int n = total_sites(c);
  DenseMatrix h = DenseMatrix::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (const Bond& b : c.apparatus) add_bond(h, 1 + b.i, 1 + b.j, b.coupling, -1.0);
  return h;
}

DenseMatrix dense_environment_hamiltonian(const CouplingSet& c) {
  const int ne = c.config.n_environment;
  check_size(ne);
  DenseMatrix h = DenseMatrix::Zero(Eigen::Index{1} << ne, Eigen::Index{1} << ne);
  for (const Bond& b : c.environment) add_bond(h, b.i, b.j, b.coupling, 1.0);
  return h;
}

DenseMatrix dense_linear_hamiltonian(const CouplingSet& c) {
  total_sites(c);
  const int na = c.config.n_apparatus;
  const int e0 = 1 + na;
  DenseMatrix h = dense_apparatus_hamiltonian(c);
  for (const Bond& b : c.environment) add_bond(h, e0 + b.i, e0 + b.j, b.coupling, 1.0);
  for (const Bond& b : c.app_env) add_bond(h, 1 + b.i, e0 + b.j, b.coupling, 1.0);
  for (std::size_t k = 0; k < c.sys_env.size(); ++k)
    add_bond(h, 0, e0 + static_cast<int>(k), c.sys_env[k], 1.0);
  for (std::size_t k = 0; k < c.sys_app.size(); ++k)
    add_bond(h, 0, 1 + static_cast<int>(k), AxisTriple{0.0, 0.0, c.sys_app[k]}, 1.0);
  return h;
}

DenseMatrix dense_magnetization_operator(const CouplingSet& c) {
  const int n = total_sites(c);
  DenseMatrix m = DenseMatrix::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (int k = 0; k < c.config.n_apparatus; ++k) m += dense_spin_operator(n, 1 + k, Axis::Z);
  return m;
}

double dense_ground_energy(const DenseMatrix& h) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

DensePropagator::DensePropagator(const DenseMatrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<Complex>() * Complex(0.0, -dt)).array().exp().matrix();
  u_ = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

DenseTrajectory dense_evolve(const CouplingSet& c, const StateVector& psi0,
                             const TrajectoryConfig& traj) {
  const long n_steps = step_count(traj);
  const DenseMatrix h_lin = dense_linear_hamiltonian(c);
  const DenseMatrix m_op = dense_magnetization_operator(c);
  const Eigen::VectorXd m_diag = m_op.diagonal().real();
  const double mu = c.mu();
  auto field = [&](const StateVector& v) {
    return (v.cwiseAbs2().array() * m_diag.array()).sum();
  };
  auto step_with = [&](double p, const StateVector& v) {
    return DensePropagator(h_lin - (mu * p) * m_op, traj.dt).apply(v);
  };

  DenseTrajectory out;
  StateVector psi = psi0;
  out.t.push_back(0.0);
  out.states.push_back(psi);
  const DensePropagator linear(h_lin, traj.dt);
  for (long step = 1; step <= n_steps; ++step) {
    const double b0 = field(psi);
    if (mu == 0.0) {
      psi = linear.apply(psi);
    } else if (traj.field_scheme == FieldScheme::StepStart) {
      psi = step_with(b0, psi);
    } else {
      // Plain fixed-point iteration of p = (b0 + B[U(p) psi]) / 2, a
      // contraction for small dt.
      double p = b0;
      StateVector next = step_with(p, psi);
      for (int it = 0; it < 200; ++it) {
        const double p_new = 0.5 * (b0 + field(next));
        if (std::abs(p_new - p) < 1e-15) break;
        p = p_new;
        next = step_with(p, psi);
      }
      psi = next;
    }
    if (step % traj.record_stride == 0 || step == n_steps) {
      out.t.push_back(static_cast<double>(step) * traj.dt);
      out.states.push_back(psi);
    }
  }
  return out;
}

}  // namespace spincollapse
