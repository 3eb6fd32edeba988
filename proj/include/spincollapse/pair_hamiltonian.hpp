#pragma once

#include <array>
#include <span>
#include <vector>

#include "spincollapse/hilbert.hpp"

namespace spincollapse {

// One bilinear term  jx S_i^x S_j^x + jy S_i^y S_j^y + jz S_i^z S_j^z.
struct PairCoupling {
  int i = 0;
  int j = 0;
  double jx = 0.0;
  double jy = 0.0;
  double jz = 0.0;
};

// A sum of bilinear spin terms compiled for fast application: all z-z parts
// are folded into one diagonal, and every pair's x-x and y-y parts become a
// single double-flip term whose amplitude depends only on whether the two
// spins are aligned.
class PairHamiltonian {
 public:
  PairHamiltonian() = default;
  PairHamiltonian(int n_sites, std::span<const PairCoupling> pairs);

  int num_sites() const { return n_sites_; }
  Eigen::Index dimension() const { return Eigen::Index{1} << n_sites_; }
  const Eigen::VectorXd& diagonal() const { return diag_; }
  const std::vector<PairCoupling>& pairs() const { return pairs_; }

  // out = H psi + z_field * (sum over sites in z_mask of S^z) psi.
  // The optional z term is diagonal and is fused into the diagonal pass.
  void apply(const StateVector& psi, StateVector& out, double z_field = 0.0,
             BasisState z_mask = 0) const;
  StateVector apply(const StateVector& psi) const;

  // <psi|H|psi>, real because H is Hermitian.
  double expectation(const StateVector& psi) const;

  // Sum over pairs of (|jx| + |jy| + |jz|) / 4, an upper bound on ||H||.
  double norm_bound() const;

 private:
  struct FlipTerm {
    BasisState mask;
    int low;
    int high;
    double aligned;
    double anti;
    // -1 reads psi; otherwise reads the copy of psi with bit `source` flipped
    // and mask holds only the high bit.
    int source = -1;
    // Index into patterns_ when source >= 0.
    int pattern = -1;
  };
  // Interleaved re/im amplitudes over 16 consecutive indices, for the high
  // bit clear (first half) and set (second half).
  using Pattern = std::array<double, 64>;

  template <int Run>
  static void add_flip_term(const FlipTerm& t, const Complex* src, Complex* dst, Eigen::Index base,
                            Eigen::Index block);
  static void add_pattern_term(const FlipTerm& t, const Pattern& pat, const Complex* src,
                               Complex* dst, Eigen::Index base, Eigen::Index block);

  int n_sites_ = 0;
  std::vector<PairCoupling> pairs_;
  std::vector<FlipTerm> flips_;
  // Flip terms grouped by the part of their mask above the tile bits.
  std::vector<std::vector<FlipTerm>> groups_;
  std::vector<Pattern> patterns_;
  // Low bits whose flipped copies are needed by pattern terms.
  std::vector<int> flipped_bits_;
  int tile_bits_ = 0;
  int block_bits_ = 0;
  Eigen::VectorXd diag_;
};

}  // namespace spincollapse
