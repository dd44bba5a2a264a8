#include "doctest.h"

#include <cmath>

#include "polyxform/family.hpp"
#include "polyxform/rng.hpp"
#include "polyxform/vandermonde.hpp"

using namespace polyxform;

namespace {

std::vector<MultiIndex> line_monomials(int d) {
  std::vector<MultiIndex> a;
  for (int k = 0; k <= d; ++k) a.push_back({k});
  return a;
}

}  // namespace

TEST_CASE("classical vandermonde in one variable") {
  // alpha = {0,1,2} at x = (0,1,2): prod_{i<j} (x_j - x_i) = 1*2*1 = 2.
  const PointTuple pts = {{0.0}, {1.0}, {2.0}};
  CHECK(layer_vandermonde(line_monomials(2), pts) == doctest::Approx(2.0).epsilon(1e-14));

  // Random points match the product formula.
  const CounterRng rng(21, 1);
  std::uint64_t c = 0;
  for (int trial = 0; trial < 50; ++trial) {
    PointTuple x(4);
    for (auto& p : x) p = {rng.uniform(c++, -2.0, 2.0)};
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = i + 1; j < x.size(); ++j) prod *= x[j][0] - x[i][0];
    const double det = layer_vandermonde(line_monomials(3), x);
    CHECK(det == doctest::Approx(prod).epsilon(1e-10));
  }
}

TEST_CASE("determinant vanishes on repeated points and flips sign on swaps") {
  const CounterRng rng(22, 2);
  std::uint64_t c = 0;
  PointTuple x = {{rng.uniform(c++, -1.0, 1.0)}, {rng.uniform(c++, -1.0, 1.0)}, {0.0}};
  x[2] = x[0];
  CHECK(std::abs(layer_vandermonde(line_monomials(2), x)) <= 1e-14);

  PointTuple y = {{0.3}, {-0.7}, {1.1}};
  const double d0 = layer_vandermonde(line_monomials(2), y);
  std::swap(y[0], y[1]);
  CHECK(layer_vandermonde(line_monomials(2), y) == doctest::Approx(-d0).epsilon(1e-12));
}

TEST_CASE("float determinant matches the exact Leibniz twin") {
  // Two-variable monomials up to degree 1: {(0,0), (0,1), (1,0)}.
  const std::vector<MultiIndex> alpha = {{0, 0}, {0, 1}, {1, 0}};
  const CounterRng rng(23, 3);
  std::uint64_t c = 0;
  for (int trial = 0; trial < 30; ++trial) {
    PointTuple xd(3);
    std::vector<std::vector<Rational>> xq(3);
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 2; ++k) {
        const std::int64_t num =
            static_cast<std::int64_t>(rng.index(c++, 65)) - 32;  // dyadic in [-2, 2]
        xq[static_cast<std::size_t>(i)].push_back(Rational(num, 16));
        xd[static_cast<std::size_t>(i)].push_back(static_cast<double>(num) / 16.0);
      }
    }
    const double det = layer_vandermonde(alpha, xd);
    const Rational exact = layer_vandermonde_exact(alpha, xq);
    CHECK(det == doctest::Approx(exact.to_double()).epsilon(1e-11));
  }
}

TEST_CASE("evaluate_V multiplies layer determinants") {
  const IndexFamily fam = full_family(1, 2, 1);  // two layers of {1, t}
  const PointTuple pts = {{0.25}, {0.75}};
  const VandermondeEvaluation ev = evaluate_V(fam, pts);
  REQUIRE(ev.per_layer.size() == 2);
  CHECK(ev.per_layer[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ev.per_layer[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ev.product == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("cofactor matches the complementary minor") {
  // One-variable degree-2 layer: top multiindex is t^2, complementary minor
  // at xprime = (a, b) is the degree-1 determinant b - a, sign (-1)^{1+3}.
  const std::vector<MultiIndex> alpha = line_monomials(2);
  const PointTuple xprime = {{0.4}, {1.3}};
  CHECK(cofactor_top_coefficient(alpha, xprime) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("coercivity exponent closed form") {
  // Full (1,1,1): #A = 2, |A| = 1, p = 2/3.
  CHECK(coercivity_exponent(full_family(1, 1, 1)) == Rational(2, 3));
  // Full (1,1,2): #A = 3, |A| = 3, p = 1/2.
  CHECK(coercivity_exponent(full_family(1, 1, 2)) == Rational(1, 2));
}

TEST_CASE("coercivity quadrature against the exact kinked integral") {
  // Integral of |x2 - x1| over [0,1]^2 is 1/3; midpoint quadrature at
  // resolution K gives exactly (1 - 1/K^2)/3.
  const IndexFamily fam = full_family(1, 1, 1);
  Box dom;
  dom.lo = {0.0};
  dom.hi = {1.0};
  Box full = dom;
  const GridSet E = GridSet::from_boxes(dom, {32}, {full});
  const CoercivityReport rep = coercivity_ratio(fam, {E, E});
  const double expected = (1.0 - 1.0 / (32.0 * 32.0)) / 3.0;
  CHECK(rep.lhs == doctest::Approx(expected).epsilon(1e-12));
  CHECK(rep.p == Rational(2, 3));
  // rhs_base = (|E_1| |E_2|)^{1/p} with |E| = 1.
  CHECK(rep.rhs_base == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.ratio == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("separated intervals integrate a linear integrand exactly") {
  // On [0,1] x [2,3] the integrand x2 - x1 never changes sign; midpoint
  // quadrature is exact for it: integral = 2.
  const IndexFamily fam = full_family(1, 1, 1);
  Box d1, d2;
  d1.lo = {0.0};
  d1.hi = {1.0};
  d2.lo = {2.0};
  d2.hi = {3.0};
  const GridSet E1 = GridSet::from_boxes(d1, {16}, {d1});
  const GridSet E2 = GridSet::from_boxes(d2, {16}, {d2});
  const CoercivityReport rep = coercivity_ratio(fam, {E1, E2});
  CHECK(rep.lhs == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("serial twin agrees with the parallel quadrature") {
  const IndexFamily fam = full_family(1, 1, 1);
  Box dom;
  dom.lo = {-1.0};
  dom.hi = {1.5};
  const CounterRng rng(24, 6);
  const GridSet E1 = GridSet::random_union(dom, {20}, rng.fork(0));
  const GridSet E2 = GridSet::random_union(dom, {24}, rng.fork(1));
  const CoercivityReport rep = coercivity_ratio(fam, {E1, E2});
  CHECK(ref::coercivity_lhs(fam, {E1, E2}) == doctest::Approx(rep.lhs).epsilon(1e-12));
}

TEST_CASE("coercivity rejects wrong slot counts and empty sets") {
  const IndexFamily fam = full_family(1, 1, 1);
  Box dom;
  dom.lo = {0.0};
  dom.hi = {1.0};
  const GridSet E = GridSet::from_boxes(dom, {8}, {dom});
  CHECK_THROWS(coercivity_ratio(fam, {E}));  // needs #A = 2 sets
  GridSet empty(dom, {8});
  CHECK_THROWS(coercivity_ratio(fam, {E, empty}));
}
