#include "polyxform/multiindex.hpp"

#include <stdexcept>

namespace polyxform {

int degree(const MultiIndex& a) {
  int s = 0;
  for (int v : a) s += v;
  return s;
}

int dict_compare(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dict_compare: multiindex lengths differ");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

namespace {

void emit(int pos, int budget, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos == static_cast<int>(cur.size())) {
    out.push_back(cur);
    return;
  }
  // Ascending first coordinate yields dictionary order directly.
  for (int v = 0; v <= budget; ++v) {
    cur[pos] = v;
    emit(pos + 1, budget - v, cur, out);
  }
  cur[pos] = 0;
}

}  // namespace

std::vector<MultiIndex> enumerate_multiindices(int n, int d) {
  if (n < 1 || d < 0) throw std::invalid_argument("enumerate_multiindices: need n >= 1, d >= 0");
  std::vector<MultiIndex> out;
  MultiIndex cur(n, 0);
  emit(0, d, cur, out);
  return out;
}

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;  // exact: the running product is always a binomial
    if (r > INT64_MAX) throw std::overflow_error("binomial overflow");
  }
  return static_cast<std::int64_t>(r);
}

}  // namespace polyxform
