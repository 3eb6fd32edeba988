#include "spincollapse/pair_hamiltonian.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <utility>

#include "spincollapse/errors.hpp"
#include "spincollapse/parallel.hpp"

namespace spincollapse {

namespace {
// Output tiles of 2^15 amplitudes (512 KiB) pair with one source tile in L2;
// blocks of 2^10 amplitudes keep the accumulating output in L1.
constexpr int kTileBits = 15;
constexpr int kBlockBits = 10;
// Terms whose lower site is below this bit read a pre-flipped source copy.
constexpr int kShortBits = 4;
}

// Within an aligned run of 2^low indices both flipped bits are fixed, so the
// source run is contiguous and the amplitude is constant. Run == 0 selects
// the run length at runtime (long runs); short runs get a fixed trip count.
template <int Run>
void PairHamiltonian::add_flip_term(const FlipTerm& t, const Complex* src, Complex* dst,
                                    Eigen::Index base, Eigen::Index block) {
  const Eigen::Index run =
      Run > 0 ? Run
              : Eigen::Index{1} << std::min(t.low, std::countr_zero(static_cast<std::uint64_t>(block)));
  for (Eigen::Index s = base; s < base + block; s += run) {
    const auto u = static_cast<BasisState>(s);
    const double c = spin_up(u, t.low) == spin_up(u, t.high) ? t.aligned : t.anti;
    const double* from = reinterpret_cast<const double*>(src + static_cast<Eigen::Index>(u ^ t.mask));
    double* to = reinterpret_cast<double*>(dst + s);
    if constexpr (Run > 0) {
      for (int k = 0; k < 2 * Run; ++k) to[k] += c * from[k];
    } else {
      for (Eigen::Index k = 0; k < 2 * run; ++k) to[k] += c * from[k];
    }
  }
}

void PairHamiltonian::add_pattern_term(const FlipTerm& t, const Pattern& pat, const Complex* src,
                                       Complex* dst, Eigen::Index base, Eigen::Index block) {
  const Eigen::Index run =
      Eigen::Index{1} << std::min(t.high, std::countr_zero(static_cast<std::uint64_t>(block)));
  for (Eigen::Index s = base; s < base + block; s += run) {
    const auto u = static_cast<BasisState>(s);
    const double* c = pat.data() + (spin_up(u, t.high) ? 32 : 0);
    const double* from = reinterpret_cast<const double*>(src + static_cast<Eigen::Index>(u ^ t.mask));
    double* to = reinterpret_cast<double*>(dst + s);
    for (Eigen::Index k = 0; k < 2 * run; k += 32) {
      for (int j = 0; j < 32; ++j) to[k + j] += c[j] * from[k + j];
    }
  }
}

PairHamiltonian::PairHamiltonian(int n_sites, std::span<const PairCoupling> pairs)
    : n_sites_(n_sites), pairs_(pairs.begin(), pairs.end()) {
  if (n_sites < 1 || n_sites > 30) throw UsageError("pair Hamiltonian size out of range");
  const Eigen::Index n = dimension();
  diag_ = Eigen::VectorXd::Zero(n);
  for (const auto& p : pairs_) {
    if (p.i < 0 || p.j < 0 || p.i >= n_sites || p.j >= n_sites)
      throw UsageError("pair site index out of range");
    if (p.i == p.j) throw UsageError("two-site term requires distinct sites");
    const int lo = std::min(p.i, p.j), hi = std::max(p.i, p.j);
    if (p.jz != 0.0) {
      const double q = 0.25 * p.jz;
#pragma omp parallel for schedule(static) num_threads(worker_threads()) if (n >= Eigen::Index(kParallelThreshold) && !omp_in_parallel())
      for (Eigen::Index b = 0; b < n; ++b) {
        const auto u = static_cast<BasisState>(b);
        diag_[b] += spin_up(u, lo) == spin_up(u, hi) ? q : -q;
      }
    }
    if (p.jx != 0.0 || p.jy != 0.0) {
      flips_.push_back({(BasisState{1} << lo) | (BasisState{1} << hi), lo, hi,
                        0.25 * (p.jx - p.jy), 0.25 * (p.jx + p.jy)});
    }
  }
  tile_bits_ = std::min(kTileBits, n_sites);
  block_bits_ = std::min(kBlockBits, tile_bits_);
  for (auto& t : flips_) {
    if (t.low >= kShortBits || t.high < kShortBits) continue;
    Pattern pat{};
    for (int high_set = 0; high_set < 2; ++high_set) {
      for (int j = 0; j < 16; ++j) {
        const bool low_set = (j >> t.low) & 1;
        const double c = low_set == bool(high_set) ? t.aligned : t.anti;
        pat[32 * high_set + 2 * j] = c;
        pat[32 * high_set + 2 * j + 1] = c;
      }
    }
    t.source = t.low;
    t.mask = BasisState{1} << t.high;
    t.pattern = static_cast<int>(patterns_.size());
    patterns_.push_back(pat);
    if (std::find(flipped_bits_.begin(), flipped_bits_.end(), t.low) == flipped_bits_.end())
      flipped_bits_.push_back(t.low);
  }
  const BasisState in_tile = (BasisState{1} << tile_bits_) - 1;
  std::map<std::pair<int, BasisState>, std::vector<FlipTerm>> by_source;
  for (const auto& t : flips_) by_source[{t.source, t.mask & ~in_tile}].push_back(t);
  for (auto& [key, terms] : by_source) {
    std::stable_sort(terms.begin(), terms.end(),
                     [](const FlipTerm& a, const FlipTerm& b) { return a.low > b.low; });
    groups_.push_back(std::move(terms));
  }
}

void PairHamiltonian::apply(const StateVector& psi, StateVector& out, double z_field,
                            BasisState z_mask) const {
  const Eigen::Index n = dimension();
  if (psi.size() != n) throw UsageError("state vector dimension mismatch");
  out.resize(n);
  const Eigen::Index tile = Eigen::Index{1} << tile_bits_;
  const Eigen::Index block = Eigen::Index{1} << block_bits_;
  const Eigen::Index n_tiles = n / tile;
  const double z_offset = -0.5 * z_field * std::popcount(z_mask);
  const Complex* src = psi.data();
  Complex* dst = out.data();

  thread_local std::array<StateVector, kShortBits> flipped;
  std::array<const Complex*, kShortBits> flipped_src{};
  for (int bit : flipped_bits_) {
    StateVector& f = flipped[bit];
    f.resize(n);
    const Eigen::Index run = Eigen::Index{1} << bit;
#pragma omp parallel for schedule(static) num_threads(worker_threads()) if (n >= Eigen::Index(kParallelThreshold) && !omp_in_parallel())
    for (Eigen::Index s = 0; s < n; s += 2 * run) {
      for (Eigen::Index k = 0; k < run; ++k) {
        f[s + k] = src[s + run + k];
        f[s + run + k] = src[s + k];
      }
    }
    flipped_src[bit] = f.data();
  }

#pragma omp parallel for schedule(static) num_threads(worker_threads()) if (n >= Eigen::Index(kParallelThreshold) && !omp_in_parallel())
  for (Eigen::Index t_idx = 0; t_idx < n_tiles; ++t_idx) {
    const Eigen::Index tile_base = t_idx * tile;
    if (z_field != 0.0) {
      for (Eigen::Index b = tile_base; b < tile_base + tile; ++b) {
        const double zd = z_offset + z_field * std::popcount(static_cast<BasisState>(b) & z_mask);
        dst[b] = (diag_[b] + zd) * src[b];
      }
    } else {
      for (Eigen::Index b = tile_base; b < tile_base + tile; ++b) dst[b] = diag_[b] * src[b];
    }
    // All terms of one group read from the same source tile, which stays
    // cache resident while the output tile is swept block by block.
    for (const auto& group : groups_) {
      for (Eigen::Index base = tile_base; base < tile_base + tile; base += block) {
        for (const auto& t : group) {
          if (t.source >= 0) {
            add_pattern_term(t, patterns_[t.pattern], flipped_src[t.source], dst, base, block);
            continue;
          }
          switch (std::min(t.low, block_bits_)) {
            case 0: add_flip_term<1>(t, src, dst, base, block); break;
            case 1: add_flip_term<2>(t, src, dst, base, block); break;
            case 2: add_flip_term<4>(t, src, dst, base, block); break;
            case 3: add_flip_term<8>(t, src, dst, base, block); break;
            case 4: add_flip_term<16>(t, src, dst, base, block); break;
            default: add_flip_term<0>(t, src, dst, base, block); break;
          }
        }
      }
    }
  }
}

StateVector PairHamiltonian::apply(const StateVector& psi) const {
  StateVector out;
  apply(psi, out);
  return out;
}

double PairHamiltonian::expectation(const StateVector& psi) const {
  StateVector h;
  apply(psi, h);
  return inner(psi, h).real();
}

double PairHamiltonian::norm_bound() const {
  double r = 0.0;
  for (const auto& p : pairs_) r += 0.25 * (std::abs(p.jx) + std::abs(p.jy) + std::abs(p.jz));
  return r;
}

}  // namespace spincollapse
