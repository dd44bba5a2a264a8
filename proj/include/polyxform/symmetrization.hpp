#pragma once

#include <string>
#include <vector>

#include "polyxform/gridset.hpp"
#include "polyxform/rational.hpp"

namespace polyxform {

// Steiner symmetrization along one axis (0-based): each line parallel to the
// axis is replaced by the centered interval of the same occupancy mass,
// placed about the box midline. Per-line mass in integer quantum units is
// conserved exactly; the output quantum is one bit finer (endpoint cells can
// hold a half-quantum).
GridSet steiner(const GridSet& E, int axis);

// steiner along every axis, fixed ascending order 0..n-1.
GridSet full_symmetrize(const GridSet& E);

// Dense univariate polynomial with exact rational coefficients, c[k] t^k.
// Test functions are certified through exact differentiation of this form.
struct Poly {
  std::vector<Rational> c;

  int deg() const { return static_cast<int>(c.size()) - 1; }
  double eval(double t) const;
  Rational eval_exact(const Rational& t) const;
  Poly derivative() const;
  Poly antiderivative() const;  // constant term 0
  std::string str() const;
};

// f on the interval [a, b] whose k-th derivative is claimed >= 1 there.
struct SmoothTestFunction {
  Poly f;
  int k = 1;
  double a = 0.0;
  double b = 1.0;
};

// Certify min_{[a,b]} f^(k) >= 1 by exact differentiation and a Bernstein
// subdivision positivity certificate of f^(k) - 1 (all Bernstein coefficients
// nonnegative on a piece proves nonnegativity there; a negative value at a
// subdivision endpoint disproves it). Throws certification_error if f^(k)-1
// is negative somewhere or the certificate is inconclusive at max depth.
void certify_derivative_bound(const SmoothTestFunction& fn, int max_depth = 40);

struct SublevelConstant {
  int k = 0;
  int j0 = 0;      // k/2 for even k, (k+1)/2 for odd
  Rational c;      // 2^k j0! (k-j0)! / (k^k (k+1)^k)
};

SublevelConstant sublevel_constant(int k);

struct SublevelCheck {
  double lhs = 0.0;   // integral of |f| over E
  double rhs = 0.0;   // c_k * integral of |t|^k / k! over steiner(E)
  double slack = 0.0; // grid-boundary allowance subtracted before comparing
  bool holds = false;
};

// One-dimensional sublevel inequality: for certified f (k-th derivative >= 1
// on [a,b] containing E), integral_E |f| >= c_k integral_{S(E)} |t|^k / k!.
// lhs integrates |f| cell-exactly with sign-change splitting; rhs uses the
// closed form per cell of the symmetrized set. E must be 1-dimensional and
// contained in [a,b].
SublevelCheck sublevel_check(const SmoothTestFunction& fn, const GridSet& E);

}  // namespace polyxform
