#pragma once

#include <complex>
#include <cstddef>

namespace spincollapse {

// Thread cap for all internal parallel loops. Honors the
// SPINCOLLAPSE_THREADS environment variable on top of OpenMP's own limit.
int worker_threads();

// Vectors shorter than this are processed serially.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;

// Reductions below sum fixed-size chunks in a fixed order, so results do
// not depend on the thread count.
std::complex<double> deterministic_dot(const std::complex<double>* a,
                                       const std::complex<double>* b, std::size_t n);
double deterministic_norm2(const std::complex<double>* a, std::size_t n);

}  // namespace spincollapse
