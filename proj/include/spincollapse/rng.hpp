#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace spincollapse {

// SplitMix64 output function.
std::uint64_t splitmix64(std::uint64_t x);

// Substream seed for a path of labels below a parent seed:
//   s_0 = splitmix64(seed),  s_{n+1} = splitmix64(s_n ^ splitmix64(label_n + 1)).
// Used for coupling families, Lanczos start vectors and ensemble members.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

// Portable uniform variates: mt19937_64 is bit-exact across standard
// libraries, and the conversion to double is done here rather than by
// std::uniform_real_distribution, whose algorithm is unspecified.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  // In [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // In [-half_width, half_width).
  double symmetric(double half_width) { return half_width * (2.0 * unit() - 1.0); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace spincollapse
