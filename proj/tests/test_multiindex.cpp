#include "doctest.h"

#include <stdexcept>

#include <set>

#include "polyxform/multiindex.hpp"

using namespace polyxform;

TEST_CASE("binomial small values") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(7, 0) == 1);
  CHECK(binomial(7, 7) == 1);
  CHECK(binomial(3, 5) == 0);
  // Pascal recurrence on a block large enough to exercise the loop.
  for (int n = 1; n <= 20; ++n)
    for (int k = 1; k < n; ++k) CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
}

TEST_CASE("enumerate_multiindices counts binom(n+d, d)") {
  for (int n = 1; n <= 4; ++n)
    for (int d = 0; d <= 4; ++d) {
      const auto all = enumerate_multiindices(n, d);
      CHECK(static_cast<std::int64_t>(all.size()) == binomial(n + d, d));
      for (const auto& a : all) {
        CHECK(static_cast<int>(a.size()) == n);
        CHECK(degree(a) <= d);
      }
      // No duplicates.
      std::set<MultiIndex> uniq(all.begin(), all.end());
      CHECK(uniq.size() == all.size());
    }
}

TEST_CASE("dict_compare is a strict total order consistent with enumeration") {
  const auto all = enumerate_multiindices(2, 3);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(dict_compare(all[i], all[i]) == 0);
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      CHECK(dict_compare(all[i], all[j]) < 0);
      CHECK(dict_compare(all[j], all[i]) > 0);
    }
  }
}

TEST_CASE("dict order is lexicographic on the entries") {
  const MultiIndex a = {0, 3};
  const MultiIndex b = {1, 0};
  CHECK(dict_compare(a, b) < 0);  // first entry decides, degree does not
  DictLess less;
  CHECK(less(a, b));
  CHECK_FALSE(less(b, a));
  CHECK_THROWS_AS(dict_compare({0, 1}, {0, 1, 2}), std::invalid_argument);
}
