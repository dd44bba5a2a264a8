#pragma once

#include <string>
#include <utility>
#include <vector>

#include "polyxform/multiindex.hpp"

namespace polyxform {

// A finite set of (alpha, j) pairs selecting which monomial coefficients the
// averaging operator integrates against: component j of the curve carries
// sum_{alpha in layer j} u_{(alpha,j)} t^alpha. d bounds |alpha|.
struct IndexFamily {
  int n = 1;       // dimension of t
  int nprime = 1;  // number of curve components
  int d = 1;       // degree bound
  std::vector<std::pair<MultiIndex, int>> pairs;

  // Pairs grouped by layer j (index 0 .. nprime-1), each sorted in
  // dictionary order. Layers may be empty for a malformed family; the
  // admissibility report flags that rather than this accessor.
  std::vector<std::vector<MultiIndex>> layers() const;

  // Structural sanity independent of admissibility: entry shapes, ranges,
  // duplicates. Throws std::invalid_argument.
  void validate() const;

  std::string to_json() const;
  static IndexFamily from_json(const std::string& text);
};

// The family containing every |alpha| <= d in every layer.
IndexFamily full_family(int n, int nprime, int d);

}  // namespace polyxform
