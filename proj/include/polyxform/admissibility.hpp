#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyxform/family.hpp"
#include "polyxform/rational.hpp"

namespace polyxform {

// Structural flags for an index family. cardinality (#A) is present iff all
// layers have equal size; homogeneity (|A|) iff the scaling condition holds.
// beta holds the per-rank layer sums used by the strengthened spanning check:
// with each layer sorted in dictionary order, beta_j = sum over layers k of
// the j-th smallest element of layer k.
struct AdmissibilityReport {
  bool dimensionality_ok = false;
  bool scaling_ok = false;
  bool spanning_ok = false;
  bool strengthened_spanning_ok = false;
  bool nondegeneracy_ok = false;
  std::optional<std::int64_t> cardinality;
  std::optional<std::int64_t> homogeneity;
  std::vector<MultiIndex> beta;

  bool admissible() const {
    return dimensionality_ok && scaling_ok && spanning_ok && strengthened_spanning_ok &&
           nondegeneracy_ok;
  }
  std::string to_json() const;
  std::string summary() const;
};

AdmissibilityReport analyze(const IndexFamily& fam);

// Rank of the set of multiindices viewed as integer vectors (exact).
int integer_rank(const std::vector<MultiIndex>& rows);

struct ExponentPair {
  Rational p;
  Rational q;
};

// Sharp exponents p = (|A| + #A)/#A, q = |A| + #A. Throws admissibility_error
// naming the first failed condition. allow_degenerate skips only the
// nondegeneracy check (the exponent formula does not need 0 in each layer;
// the flag exists for experimentation and is off by default).
ExponentPair exponents(const IndexFamily& fam, bool allow_degenerate = false);

// Closed form for the full degree-d family: p = 1 + n'd/(n+1),
// q = binomial(n+d, d) * p.
ExponentPair full_exponents(int n, int nprime, int d);

// Convex region of (1/p, 1/q) pairs for the full degree-d operator:
// hull of (0,0), (1,1), (0,1) and, for j = 1..d,
// ((n+1)/(n+n'j+1), binomial(n+j,j)^{-1} (n+1)/(n+n'j+1)).
// Vertices are exact rationals in counterclockwise order starting at (0,0).
struct RieszPolygon {
  std::vector<std::array<Rational, 2>> vertices;

  std::string to_csv() const;  // header inv_p,inv_q; fraction strings like 3/4
  std::string to_svg() const;
};

RieszPolygon riesz_polygon(int n, int nprime, int d);

// Exact membership test; boundary counts as inside. Throws std::domain_error
// if (inv_p, inv_q) is outside the unit square.
bool polygon_contains(const RieszPolygon& poly, const Rational& inv_p, const Rational& inv_q);

}  // namespace polyxform
