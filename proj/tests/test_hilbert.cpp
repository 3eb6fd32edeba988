#include <cmath>

#include "helpers.hpp"
#include "spincollapse/dense_oracle.hpp"
#include "spincollapse/errors.hpp"

using namespace spincollapse;
using testing::embed;
using testing::max_diff;
using testing::pauli_half;
using testing::random_vector;

namespace {
const Complex I(0.0, 1.0);
SiteIndex site(int k) { return {k, Subsystem::System}; }
StateVector ket(int n, BasisState b) { return basis_state(n, b); }
}  // namespace

TEST_SUITE("spin-hilbert") {

TEST_CASE("site layout is total and ordered") {
  const SiteLayout l(4, 3);
  CHECK(l.num_sites() == 8);
  CHECK(l.site(0).subsystem == Subsystem::System);
  for (int k = 1; k <= 4; ++k) CHECK(l.site(k).subsystem == Subsystem::Apparatus);
  for (int k = 5; k < 8; ++k) CHECK(l.site(k).subsystem == Subsystem::Environment);
  CHECK(l.apparatus(0).index == 1);
  CHECK(l.environment(0).index == 5);
  CHECK_THROWS_AS(l.site(8), UsageError);
  CHECK((l.apparatus_mask() | l.environment_mask() | 1U) == l.dimension() - 1);
}

TEST_CASE("apply_sz on eigenstates") {
  CHECK(max_diff(apply_sz(site(0), ket(1, 1)), 0.5 * ket(1, 1)) == 0.0);
  CHECK(max_diff(apply_sz(site(0), ket(1, 0)), -0.5 * ket(1, 0)) == 0.0);
}

TEST_CASE("apply_sz on a two-site superposition matches the dense matrix") {
  // (|up dn> + |dn up>)/sqrt2 with site 0 the second label: bits 0b01 and 0b10.
  const StateVector psi = (ket(2, 0b01) + ket(2, 0b10)) / std::sqrt(2.0);
  const StateVector dense = embed(2, 0, pauli_half('z')) * psi;
  CHECK(max_diff(apply_sz(site(0), psi), dense) < 1e-15);
  CHECK(apply_sz(site(0), psi)[0b01].real() == doctest::Approx(0.5 / std::sqrt(2.0)));
}

TEST_CASE("apply_sx and apply_sy act as half Pauli matrices") {
  CHECK(max_diff(apply_sx(site(0), ket(1, 1)), 0.5 * ket(1, 0)) == 0.0);
  CHECK(max_diff(apply_sy(site(0), ket(1, 1)), 0.5 * I * ket(1, 0)) == 0.0);
  CHECK(max_diff(apply_sy(site(0), ket(1, 0)), -0.5 * I * ket(1, 1)) == 0.0);
  const StateVector psi = random_vector(2, 3);
  CHECK(max_diff(apply_sx(site(1), apply_sx(site(1), psi)), psi / 4.0) < 1e-15);
}

TEST_CASE("single-site operators match Kronecker oracle on every site and axis") {
  const int n = 4;
  const StateVector psi = random_vector(n, 11);
  for (int s = 0; s < n; ++s) {
    CHECK(max_diff(apply_sx(site(s), psi), embed(n, s, pauli_half('x')) * psi) < 1e-15);
    CHECK(max_diff(apply_sy(site(s), psi), embed(n, s, pauli_half('y')) * psi) < 1e-15);
    CHECK(max_diff(apply_sz(site(s), psi), embed(n, s, pauli_half('z')) * psi) < 1e-15);
  }
}

TEST_CASE("dense oracle single-site operators agree with the kernels") {
  const int n = 3;
  const StateVector psi = random_vector(n, 12);
  for (int s = 0; s < n; ++s) {
    CHECK(max_diff(dense_spin_operator(n, s, Axis::X) * psi, apply_sx(site(s), psi)) < 1e-15);
    CHECK(max_diff(dense_spin_operator(n, s, Axis::Y) * psi, apply_sy(site(s), psi)) < 1e-15);
    CHECK(max_diff(dense_spin_operator(n, s, Axis::Z) * psi, apply_sz(site(s), psi)) < 1e-15);
  }
}

TEST_CASE("out-of-range site is a usage error") {
  CHECK_THROWS_AS(apply_sz(site(1), ket(1, 0)), UsageError);
  CHECK_THROWS_AS(apply_sx(site(-1), ket(1, 0)), UsageError);
  StateVector psi(3);
  CHECK_THROWS_AS(apply_sz(site(0), psi), UsageError);
}

TEST_CASE("apply_two_site examples") {
  StateVector acc = StateVector::Zero(4);
  apply_two_site(Axis::Z, site(0), site(1), 1.0, ket(2, 0b11), acc);
  CHECK(max_diff(acc, 0.25 * ket(2, 0b11)) == 0.0);

  // |up dn> with site 1 up, site 0 down is bits 0b10; double flip gives 0b01.
  acc.setZero();
  apply_two_site(Axis::X, site(1), site(0), 1.0, ket(2, 0b10), acc);
  CHECK(max_diff(acc, 0.25 * ket(2, 0b01)) == 0.0);

  acc.setZero();
  apply_two_site(Axis::Y, site(1), site(0), 1.0, ket(2, 0b11), acc);
  const StateVector dense =
      embed(2, 1, pauli_half('y')) * (embed(2, 0, pauli_half('y')) * ket(2, 0b11));
  CHECK(max_diff(acc, dense) < 1e-15);
  CHECK(max_diff(acc, -0.25 * ket(2, 0b00)) < 1e-15);

  CHECK_THROWS_AS(apply_two_site(Axis::Z, site(0), site(0), 1.0, ket(2, 0), acc), UsageError);
}

TEST_CASE("apply_two_site accumulates and matches dense products") {
  const int n = 5;
  const StateVector psi = random_vector(n, 21);
  const char names[3] = {'x', 'y', 'z'};
  const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
  for (int a = 0; a < 3; ++a) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        StateVector acc = psi;
        apply_two_site(axes[a], site(i), site(j), 0.7, psi, acc);
        const StateVector dense =
            psi + 0.7 * (embed(n, i, pauli_half(names[a])) * (embed(n, j, pauli_half(names[a])) * psi));
        CHECK(max_diff(acc, dense) < 1e-14);
      }
    }
  }
}

TEST_CASE("vector algebra") {
  CHECK(inner(ket(1, 1), ket(1, 1)) == Complex(1.0));
  CHECK(inner(ket(1, 1), ket(1, 0)) == Complex(0.0));
  const StateVector v = 0.6 * ket(1, 1) + 0.8 * I * ket(1, 0);
  CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-15));
  // Conjugate-linear in the first argument.
  CHECK(std::abs(inner(I * ket(1, 1), ket(1, 1)) - (-I)) < 1e-15);
  const StateVector a = random_vector(3, 1), b = random_vector(3, 2);
  CHECK(max_diff(axpy(2.0 * I, a, b), 2.0 * I * a + b) == 0.0);
  CHECK(max_diff(scale(-3.0, a), -3.0 * a) == 0.0);
  CHECK_THROWS_AS(inner(a, random_vector(2, 1)), UsageError);
  CHECK_THROWS_AS(axpy(1.0, a, random_vector(2, 1)), UsageError);
}

TEST_CASE("tensor_product examples") {
  const StateVector one(StateVector::Ones(1));
  CHECK(max_diff(tensor_product(ket(1, 1), ket(1, 1), one), ket(2, 0b11)) == 0.0);
  const StateVector plus = (ket(1, 1) + ket(1, 0)) / std::sqrt(2.0);
  // System is site 0 (the second label in |A S>).
  const StateVector expect = (ket(2, 0b01) + ket(2, 0b00)) / std::sqrt(2.0);
  CHECK(max_diff(tensor_product(plus, ket(1, 0), one), expect) < 1e-16);

  const StateVector s = random_vector(1, 4), a = random_vector(2, 5), e = random_vector(1, 6);
  const StateVector kron = Eigen::kroneckerProduct(e, Eigen::kroneckerProduct(a, s).eval()).eval();
  const StateVector t = tensor_product(s, a, e);
  CHECK(max_diff(t, kron) < 1e-16);
  CHECK(norm(t) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(tensor_product(random_vector(2, 1), a, e), UsageError);
}

TEST_CASE("operator properties on random vectors") {
  const int n = 5;
  const StateVector psi = random_vector(n, 7), phi = random_vector(n, 8);
  const StateVector psi_copy = psi;
  const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
  for (Axis a : axes) {
    for (int s = 0; s < n; ++s) {
      // Hermiticity.
      const Complex lhs = inner(phi, apply_spin(a, site(s), psi));
      const Complex rhs = std::conj(inner(psi, apply_spin(a, site(s), phi)));
      CHECK(std::abs(lhs - rhs) < 1e-12);
      // Involution 4 (S^a)^2 = 1.
      CHECK(max_diff(4.0 * apply_spin(a, site(s), apply_spin(a, site(s), psi)), psi) < 1e-14);
      // Commutation on distinct sites, all axis pairs.
      for (Axis b : axes) {
        const int t = (s + 2) % n;
        const StateVector ab = apply_spin(a, site(s), apply_spin(b, site(t), psi));
        const StateVector ba = apply_spin(b, site(t), apply_spin(a, site(s), psi));
        CHECK(max_diff(ab, ba) < 1e-12);
      }
      // 2 S^a is unitary.
      CHECK(norm(2.0 * apply_spin(a, site(s), psi)) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  CHECK(max_diff(psi, psi_copy) == 0.0);
}

TEST_CASE("global spin flip reverses the amplitude order") {
  const StateVector psi = random_vector(3, 9);
  const StateVector f = global_spin_flip(psi);
  for (BasisState b = 0; b < 8; ++b) CHECK(f[static_cast<Eigen::Index>(b)] == psi[static_cast<Eigen::Index>(~b & 7U)]);
}

}  // TEST_SUITE
