#pragma once

#include <vector>

#include "polyxform/family.hpp"
#include "polyxform/gridset.hpp"
#include "polyxform/rational.hpp"

namespace polyxform {

// A tuple of #A points in R^n, outer index = point, inner index = coordinate.
using PointTuple = std::vector<std::vector<double>>;

struct VandermondeEvaluation {
  std::vector<double> per_layer;  // one determinant per layer, in layer order
  double product = 0.0;           // product over all layers
};

// Generalized Vandermonde determinant of one layer: the L x L matrix with
// entry pts[row]^{alpha[col]}, columns in dictionary order of `alpha`.
// Requires pts.size() == alpha.size(); every point must have n coordinates
// where n is the length of the multiindices.
double layer_vandermonde(const std::vector<MultiIndex>& alpha, const PointTuple& pts);

// All layer determinants of `fam` at a common point tuple, plus their product.
// Throws admissibility_error if the layers do not share a common cardinality
// (the matrices would not be square).
VandermondeEvaluation evaluate_V(const IndexFamily& fam, const PointTuple& pts);

// Exact twin of layer_vandermonde over the rationals, by Leibniz expansion.
// Factorial cost; intended for cross-checking small cases (size <= 6).
Rational layer_vandermonde_exact(const std::vector<MultiIndex>& alpha,
                                 const std::vector<std::vector<Rational>>& pts);

// Coefficient of x^{max(alpha)} (dictionary maximum) in the one-variable-
// extended determinant V_alpha(x, xprime[0], ..., xprime[L-2]): equals
// (-1)^{1+L} times the complementary minor, whose absolute value is the
// layer determinant of alpha minus its maximum at xprime.
double cofactor_top_coefficient(const std::vector<MultiIndex>& alpha, const PointTuple& xprime);

struct CoercivityReport {
  double lhs = 0.0;       // integral of |V| over the product of the sets
  double rhs_base = 0.0;  // product of |E_j|^{1/p}
  double ratio = 0.0;     // lhs / rhs_base
  Rational p;             // #A / (#A + |A|), exact
};

// The sub-L^1 exponent p = #A / (#A + |A|) attached to the coercivity bound.
Rational coercivity_exponent(const IndexFamily& fam);

// Occupancy-weighted midpoint quadrature of |V| over E_1 x ... x E_{#A},
// divided by prod_j |E_j|^{1/p}. Requires an admissible family, one set per
// point slot, and positive measures (measure-zero input is degenerate and
// rejected). The total number of cell tuples is capped at 10^7; choose
// resolutions accordingly.
CoercivityReport coercivity_ratio(const IndexFamily& fam, const std::vector<GridSet>& sets);

namespace ref {
// Serial twin of the parallel lhs quadrature inside coercivity_ratio.
double coercivity_lhs(const IndexFamily& fam, const std::vector<GridSet>& sets);
}  // namespace ref

}  // namespace polyxform
