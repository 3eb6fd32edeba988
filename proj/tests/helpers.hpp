#pragma once

#include <doctest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "spincollapse/hilbert.hpp"
#include "spincollapse/lanczos.hpp"

namespace testing {

using spincollapse::Complex;
using spincollapse::StateVector;

inline double max_diff(const StateVector& a, const StateVector& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline StateVector random_vector(int n_sites, std::uint64_t seed) {
  return spincollapse::random_state(Eigen::Index{1} << n_sites, seed);
}

// 2x2 spin matrices written out by hand, basis order (dn, up).
inline Eigen::Matrix2cd pauli_half(char axis) {
  Eigen::Matrix2cd m;
  const Complex i(0.0, 1.0);
  if (axis == 'x') m << 0.0, 0.5, 0.5, 0.0;
  if (axis == 'y') m << 0.0, 0.5 * i, -0.5 * i, 0.0;
  if (axis == 'z') m << -0.5, 0.0, 0.0, 0.5;
  return m;
}

// Operator on `site` of an n-site register; site 0 is the rightmost factor.
inline Eigen::MatrixXcd embed(int n_sites, int site, const Eigen::Matrix2cd& op) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int s = n_sites - 1; s >= 0; --s) {
    const Eigen::MatrixXcd f = s == site ? Eigen::MatrixXcd(op) : Eigen::MatrixXcd::Identity(2, 2);
    out = Eigen::kroneckerProduct(out, f).eval();
  }
  return out;
}

}  // namespace testing
