#pragma once

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polyxform::par {

// Thread count in effect: explicit set_threads() wins, then POLYXFORM_THREADS,
// then the OpenMP default. Always >= 1.
int max_threads();
void set_threads(int n);  // n <= 0 resets to the environment default

// Fixed-order pairwise fold; the reference reduction for all float sums.
double pairwise_fold(const std::vector<double>& v);

inline constexpr std::int64_t kSumChunk = 8192;

// Deterministic parallel sum: chunk boundaries and the reduction tree depend
// only on count, never on the thread count, so results are bit-identical for
// any number of threads. Chunks are summed serially left to right and the
// per-chunk partials are folded pairwise.
template <class Term>
double sum(std::int64_t count, Term&& term, std::int64_t chunk = kSumChunk) {
  if (count <= 0) return 0.0;
  const std::int64_t nchunks = (count + chunk - 1) / chunk;
  std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_threads())
#endif
  for (std::int64_t c = 0; c < nchunks; ++c) {
    const std::int64_t lo = c * chunk;
    const std::int64_t hi = lo + chunk < count ? lo + chunk : count;
    double acc = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(c)] = acc;
  }
  return pairwise_fold(partial);
}

// Two sums over the same terms (value and square, say) sharing one pass.
template <class Term2>
void sum2(std::int64_t count, Term2&& term, double& out_a, double& out_b,
          std::int64_t chunk = kSumChunk) {
  if (count <= 0) {
    out_a = out_b = 0.0;
    return;
  }
  const std::int64_t nchunks = (count + chunk - 1) / chunk;
  std::vector<double> pa(static_cast<std::size_t>(nchunks), 0.0);
  std::vector<double> pb(static_cast<std::size_t>(nchunks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_threads())
#endif
  for (std::int64_t c = 0; c < nchunks; ++c) {
    const std::int64_t lo = c * chunk;
    const std::int64_t hi = lo + chunk < count ? lo + chunk : count;
    double acc_a = 0.0, acc_b = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      double a, b;
      term(i, a, b);
      acc_a += a;
      acc_b += b;
    }
    pa[static_cast<std::size_t>(c)] = acc_a;
    pb[static_cast<std::size_t>(c)] = acc_b;
  }
  out_a = pairwise_fold(pa);
  out_b = pairwise_fold(pb);
}

// Exact integer sum; order-independent, so a plain reduction is fine.
template <class Term>
std::uint64_t sum_u64(std::int64_t count, Term&& term) {
  std::uint64_t total = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : total) num_threads(max_threads())
#endif
  for (std::int64_t i = 0; i < count; ++i) total += term(i);
  return total;
}

// Parallel loop with independent iterations.
template <class Body>
void for_each(std::int64_t count, Body&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(max_threads())
#endif
  for (std::int64_t i = 0; i < count; ++i) body(i);
}

}  // namespace polyxform::par
