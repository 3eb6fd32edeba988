#include "spincollapse/hilbert.hpp"

#include <omp.h>

#include <bit>
#include <string>

#include "spincollapse/errors.hpp"
#include "spincollapse/parallel.hpp"

namespace spincollapse {

SiteLayout::SiteLayout(int n_apparatus, int n_environment)
    : n_app_(n_apparatus), n_env_(n_environment) {
  if (n_apparatus < 0 || n_environment < 0 || num_sites() > 40)
    throw UsageError("site layout out of range");
}

SiteIndex SiteLayout::apparatus(int k) const {
  if (k < 0 || k >= n_app_) throw UsageError("apparatus site out of range");
  return {1 + k, Subsystem::Apparatus};
}

SiteIndex SiteLayout::environment(int k) const {
  if (k < 0 || k >= n_env_) throw UsageError("environment site out of range");
  return {1 + n_app_ + k, Subsystem::Environment};
}

SiteIndex SiteLayout::site(int index) const {
  if (index < 0 || index >= num_sites()) throw UsageError("site index out of range");
  if (index == 0) return system();
  if (index <= n_app_) return {index, Subsystem::Apparatus};
  return {index, Subsystem::Environment};
}

int num_sites(const StateVector& psi) {
  const auto n = static_cast<std::uint64_t>(psi.size());
  if (n == 0 || !std::has_single_bit(n))
    throw UsageError("state vector length " + std::to_string(n) + " is not a power of two");
  return std::countr_zero(n);
}

StateVector basis_state(int n_sites, BasisState bits) {
  const BasisState dim = BasisState{1} << n_sites;
  if (bits >= dim) throw UsageError("basis state out of range");
  StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(dim));
  psi(static_cast<Eigen::Index>(bits)) = 1.0;
  return psi;
}

namespace {

int checked_site(SiteIndex site, const StateVector& psi) {
  const int l = num_sites(psi);
  if (site.index < 0 || site.index >= l)
    throw UsageError("site index " + std::to_string(site.index) + " out of range for L=" +
                     std::to_string(l));
  return site.index;
}

void check_same_dim(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw UsageError("state vector dimension mismatch");
}

}  // namespace

StateVector apply_sz(SiteIndex site, const StateVector& psi) {
  const int s = checked_site(site, psi);
  const Eigen::Index n = psi.size();
  StateVector out(n);
#pragma omp parallel for schedule(static) num_threads(worker_threads()) if (n >= Eigen::Index(kParallelThreshold) && !omp_in_parallel())
  for (Eigen::Index b = 0; b < n; ++b)
    out[b] = spin_up(static_cast<BasisState>(b), s) ? 0.5 * psi[b] : -0.5 * psi[b];
  return out;
}

StateVector apply_sx(SiteIndex site, const StateVector& psi) {
  const int s = checked_site(site, psi);
  const Eigen::Index n = psi.size();
  const Eigen::Index flip = Eigen::Index{1} << s;
  StateVector out(n);
#pragma omp parallel for schedule(static) num_threads(worker_threads()) if (n >= Eigen::Index(kParallelThreshold) && !omp_in_parallel())
  for (Eigen::Index b = 0; b < n; ++b) out[b] = 0.5 * psi[b ^ flip];
  return out;
}

StateVector apply_sy(SiteIndex site, const StateVector& psi) {
  const int s = checked_site(site, psi);
  const Eigen::Index n = psi.size();
  const Eigen::Index flip = Eigen::Index{1} << s;
  const Complex half_i{0.0, 0.5};
  StateVector out(n);
  // out[b] = <b|S^y|b^flip> psi[b^flip]; the source was up iff b is down.
#pragma omp parallel for schedule(static) num_threads(worker_threads()) if (n >= Eigen::Index(kParallelThreshold) && !omp_in_parallel())
  for (Eigen::Index b = 0; b < n; ++b)
    out[b] = spin_up(static_cast<BasisState>(b), s) ? -half_i * psi[b ^ flip] : half_i * psi[b ^ flip];
  return out;
}

StateVector apply_spin(Axis axis, SiteIndex site, const StateVector& psi) {
  switch (axis) {
    case Axis::X: return apply_sx(site, psi);
    case Axis::Y: return apply_sy(site, psi);
    case Axis::Z: return apply_sz(site, psi);
  }
  throw UsageError("unknown axis");
}

void apply_two_site(Axis axis, SiteIndex i, SiteIndex j, double coupling, const StateVector& psi,
                    StateVector& acc) {
  const int si = checked_site(i, psi);
  const int sj = checked_site(j, psi);
  if (si == sj) throw UsageError("two-site term requires distinct sites");
  check_same_dim(psi, acc);
  const Eigen::Index n = psi.size();
  const double q = 0.25 * coupling;
  if (axis == Axis::Z) {
#pragma omp parallel for schedule(static) num_threads(worker_threads()) if (n >= Eigen::Index(kParallelThreshold) && !omp_in_parallel())
    for (Eigen::Index b = 0; b < n; ++b) {
      const auto u = static_cast<BasisState>(b);
      acc[b] += (spin_up(u, si) == spin_up(u, sj) ? q : -q) * psi[b];
    }
    return;
  }
  const Eigen::Index flip = (Eigen::Index{1} << si) | (Eigen::Index{1} << sj);
  // S^x S^x always contributes +1/4; S^y S^y contributes -1/4 between
  // aligned pairs and +1/4 between anti-aligned pairs.
  const double aligned = axis == Axis::X ? q : -q;
#pragma omp parallel for schedule(static) num_threads(worker_threads()) if (n >= Eigen::Index(kParallelThreshold) && !omp_in_parallel())
  for (Eigen::Index b = 0; b < n; ++b) {
    const auto u = static_cast<BasisState>(b);
    acc[b] += (spin_up(u, si) == spin_up(u, sj) ? aligned : q) * psi[b ^ flip];
  }
}

Complex inner(const StateVector& psi, const StateVector& phi) {
  check_same_dim(psi, phi);
  return deterministic_dot(psi.data(), phi.data(), static_cast<std::size_t>(psi.size()));
}

double norm(const StateVector& psi) {
  return std::sqrt(deterministic_norm2(psi.data(), static_cast<std::size_t>(psi.size())));
}

StateVector axpy(Complex a, const StateVector& psi, const StateVector& phi) {
  check_same_dim(psi, phi);
  return a * psi + phi;
}

StateVector scale(Complex a, const StateVector& psi) { return a * psi; }

StateVector tensor_product(const StateVector& sys, const StateVector& app, const StateVector& env) {
  if (sys.size() != 2) throw UsageError("system factor must have dimension 2");
  const int n_app = num_sites(app);
  const int n_env = num_sites(env);
  const Eigen::Index n = Eigen::Index{1} << (1 + n_app + n_env);
  const Eigen::Index app_mask = (Eigen::Index{1} << n_app) - 1;
  StateVector out(n);
  for (Eigen::Index b = 0; b < n; ++b)
    out[b] = sys[b & 1] * app[(b >> 1) & app_mask] * env[b >> (1 + n_app)];
  return out;
}

StateVector global_spin_flip(const StateVector& psi) {
  num_sites(psi);
  return psi.reverse();
}

}  // namespace spincollapse
