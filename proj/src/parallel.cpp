#include "spincollapse/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

namespace spincollapse {

namespace {
constexpr std::size_t kChunk = 4096;
}

int worker_threads() {
  int n = omp_get_max_threads();
  if (const char* cap = std::getenv("SPINCOLLAPSE_THREADS")) {
    try {
      const int c = std::stoi(cap);
      if (c >= 1) n = std::min(n, c);
    } catch (...) {
    }
  }
  return std::max(n, 1);
}

std::complex<double> deterministic_dot(const std::complex<double>* a,
                                       const std::complex<double>* b, std::size_t n) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::complex<double>> partial(chunks);
#pragma omp parallel for schedule(static) num_threads(worker_threads()) if (n >= kParallelThreshold && !omp_in_parallel())
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
    double re = 0.0, im = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      // conj(a) * b
      re += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
      im += a[k].real() * b[k].imag() - a[k].imag() * b[k].real();
    }
    partial[c] = {re, im};
  }
  std::complex<double> sum{0.0, 0.0};
  for (const auto& p : partial) sum += p;
  return sum;
}

double deterministic_norm2(const std::complex<double>* a, std::size_t n) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks);
#pragma omp parallel for schedule(static) num_threads(worker_threads()) if (n >= kParallelThreshold && !omp_in_parallel())
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += std::norm(a[k]);
    partial[c] = s;
  }
  double sum = 0.0;
  for (double p : partial) sum += p;
  return sum;
}

}  // namespace spincollapse
