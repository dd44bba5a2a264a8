#include "doctest.h"

#include <cmath>
#include <vector>

#include "polyxform/parallel.hpp"
#include "polyxform/rng.hpp"

using namespace polyxform;

TEST_CASE("pairwise fold is independent of the thread count") {
  // Adversarial magnitudes: alternating huge and tiny terms make naive
  // left-to-right and chunked sums disagree, so bit equality across thread
  // counts is a real statement about the reduction tree.
  const std::int64_t N = 1 << 18;
  const CounterRng rng(17, 0);
  const auto term = [&](std::int64_t i) {
    const double u = rng.uniform(static_cast<std::uint64_t>(i), -1.0, 1.0);
    return (i % 2 == 0) ? u * 1e16 : u * 1e-16;
  };
  const int saved = par::max_threads();
  par::set_threads(1);
  const double s1 = par::sum(N, term);
  par::set_threads(2);
  const double s2 = par::sum(N, term);
  par::set_threads(saved);
  const double sN = par::sum(N, term);
  CHECK(s1 == s2);
  CHECK(s1 == sN);
}

TEST_CASE("sum matches a serial pairwise reference") {
  const std::int64_t N = 100001;  // odd, not a chunk multiple
  const auto term = [](std::int64_t i) { return 1.0 / static_cast<double>(i + 1); };
  const double s = par::sum(N, term);
  double ref = 0.0;
  for (std::int64_t i = 0; i < N; ++i) ref += term(i);
  CHECK(s == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("sum2 accumulates both moments deterministically") {
  const std::int64_t N = 40000;
  const CounterRng rng(18, 1);
  const auto term = [&](std::int64_t i, double& a, double& b) {
    const double u = rng.uniform(static_cast<std::uint64_t>(i), 0.0, 1.0);
    a = u;
    b = u * u;
  };
  double a1 = 0.0, b1 = 0.0, aN = 0.0, bN = 0.0;
  const int saved = par::max_threads();
  par::set_threads(1);
  par::sum2(N, term, a1, b1);
  par::set_threads(saved);
  par::sum2(N, term, aN, bN);
  CHECK(a1 == aN);
  CHECK(b1 == bN);
  CHECK(a1 == doctest::Approx(N / 2.0).epsilon(0.02));
  CHECK(b1 == doctest::Approx(N / 3.0).epsilon(0.02));
}

TEST_CASE("sum_u64 is exact") {
  const std::int64_t N = 123457;
  const std::uint64_t s =
      par::sum_u64(N, [](std::int64_t i) -> std::uint64_t { return static_cast<std::uint64_t>(i); });
  CHECK(s == static_cast<std::uint64_t>(N) * (static_cast<std::uint64_t>(N) - 1) / 2);
}

TEST_CASE("set_threads clamps to at least one") {
  const int saved = par::max_threads();
  par::set_threads(1);
  CHECK(par::max_threads() == 1);
  par::set_threads(saved);
  CHECK(par::max_threads() >= 1);
}

TEST_CASE("counter rng is pure and uniform-ish") {
  const CounterRng rng(99, 7);
  CHECK(rng.u01(12345) == rng.u01(12345));
  CHECK(rng.u01(12345) != rng.u01(12346));
  const CounterRng other(99, 8);
  CHECK(rng.u01(0) != other.u01(0));
  double acc = 0.0;
  const int N = 20000;
  for (int i = 0; i < N; ++i) acc += rng.u01(static_cast<std::uint64_t>(i));
  CHECK(acc / N == doctest::Approx(0.5).epsilon(0.02));
  // Bounds are respected by uniform and index.
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.uniform(static_cast<std::uint64_t>(i), 2.0, 3.0);
    CHECK(v >= 2.0);
    CHECK(v < 3.0);
    const std::int64_t k = rng.index(static_cast<std::uint64_t>(i), 10);
    CHECK(k >= 0);
    CHECK(k < 10);
  }
  // fork produces a decorrelated stream with the same interface.
  const CounterRng f = rng.fork(3);
  CHECK(f.u01(0) != rng.u01(0));
}
