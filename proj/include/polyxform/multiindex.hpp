#pragma once

#include <cstdint>
#include <vector>

namespace polyxform {

// Nonnegative integer exponent vector alpha in Z_{>=0}^n. Kept as plain
// vector<int>; all combinatorics on these stay in exact integer arithmetic.
using MultiIndex = std::vector<int>;

// |alpha| = alpha_1 + ... + alpha_n.
int degree(const MultiIndex& a);

// Dictionary (lexicographic) order: the smallest index where the entries
// differ decides. Returns <0, 0, >0 like strcmp.
int dict_compare(const MultiIndex& a, const MultiIndex& b);

struct DictLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    return dict_compare(a, b) < 0;
  }
};

// All alpha with n entries and |alpha| <= d, in dictionary order.
// Size is binomial(n + d, d).
std::vector<MultiIndex> enumerate_multiindices(int n, int d);

// Exact binomial coefficient; throws std::overflow_error if it leaves int64.
std::int64_t binomial(std::int64_t n, std::int64_t k);

}  // namespace polyxform
