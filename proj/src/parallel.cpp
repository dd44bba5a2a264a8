#include "polyxform/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace polyxform::par {

namespace {

std::atomic<int> g_threads{0};

int env_threads() {
  if (const char* s = std::getenv("POLYXFORM_THREADS")) {
    const int v = std::atoi(s);
    if (v >= 1) return v;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

int max_threads() {
  const int v = g_threads.load(std::memory_order_relaxed);
  return v >= 1 ? v : env_threads();
}

void set_threads(int n) { g_threads.store(n >= 1 ? n : 0, std::memory_order_relaxed); }

double pairwise_fold(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  std::vector<double> cur(v);
  while (cur.size() > 1) {
    std::vector<double> next((cur.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      const std::size_t a = 2 * i, b = 2 * i + 1;
      next[i] = b < cur.size() ? cur[a] + cur[b] : cur[a];
    }
    cur.swap(next);
  }
  return cur[0];
}

}  // namespace polyxform::par
