#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "polyxform/errors.hpp"
#include "polyxform/rng.hpp"
#include "polyxform/verification.hpp"

using namespace polyxform;

namespace {

Box boxn(std::vector<double> lo, std::vector<double> hi) {
  Box b;
  b.lo = std::move(lo);
  b.hi = std::move(hi);
  return b;
}

GridSet unit_square() {
  return GridSet::from_boxes(boxn({-1.5, -1.5}, {1.5, 1.5}), {48, 48},
                             {boxn({0, 0}, {1, 1})});
}

}  // namespace

TEST_CASE("reduced order drops the constant slot of each layer") {
  const auto red = reduced_order(full_family(1, 1, 2));
  REQUIRE(red.size() == 2);
  CHECK(red[0].first == MultiIndex{1});
  CHECK(red[1].first == MultiIndex{2});
  CHECK(red[0].second == 1);
  // Families without the constant pair are rejected.
  IndexFamily bad;
  bad.n = 1;
  bad.nprime = 1;
  bad.d = 2;
  bad.pairs = {{{1}, 1}, {{2}, 1}};
  CHECK_THROWS(reduced_order(bad));
}

TEST_CASE("left flow shifts time") {
  const auto r = left_flow({0.5, -1.0}, {0.25, 0.75});
  CHECK(r == std::vector<double>{0.75, -0.25});
}

TEST_CASE("right flow pins the graph point at the base time") {
  const IndexFamily fam = full_family(2, 2, 2);
  const CoefficientLayout layout(fam);
  const CounterRng rng(31, 5);
  std::uint64_t c = 0;
  ParamPoint u(static_cast<std::size_t>(layout.size()));
  for (auto& v : u) v = rng.uniform(c++, -1.0, 1.0);
  const std::vector<double> t = {0.4, -0.7};
  std::vector<double> x(reduced_order(fam).size());
  for (auto& v : x) v = rng.uniform(c++, -2.0, 2.0);

  const ParamPoint v = right_flow(fam, u, x, t);
  const auto p0 = graph_point(fam, u, t);
  const auto p1 = graph_point(fam, v, t);
  REQUIRE(p0.size() == p1.size());
  for (std::size_t i = 0; i < p0.size(); ++i)
    CHECK(p1[i] == doctest::Approx(p0[i]).epsilon(1e-12));

  // Away from the base time the sheared curve moves.
  const auto q0 = graph_point(fam, u, {0.9, 0.1});
  const auto q1 = graph_point(fam, v, {0.9, 0.1});
  double moved = 0.0;
  for (std::size_t i = 0; i < q0.size(); ++i) moved += std::abs(q1[i] - q0[i]);
  CHECK(moved > 1e-6);
}

TEST_CASE("incidence estimate hits the unit square target") {
  FlowSpec spec;
  spec.fam = full_family(1, 1, 1);
  spec.t = {0.3};
  spec.u = {0.2, 0.1};
  spec.samples = 200000;
  spec.seed = 7;
  const GridSet F = unit_square();
  const IFunctionalReport rep = i_functional_mc(spec, F);
  CHECK(rep.target == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(rep.estimate - rep.target) <= 3 * rep.std_error + rep.truncation_bound);
  CHECK(rep.std_error > 0.0);
  CHECK(rep.samples >= spec.samples);
  CHECK(rep.samples % 64 == 0);  // rounded up to whole strata
}

TEST_CASE("incidence estimate is zero on an empty set") {
  FlowSpec spec;
  spec.fam = full_family(1, 1, 1);
  spec.t = {0.0};
  spec.u = {0.0, 0.0};
  spec.samples = 5000;
  const GridSet F(boxn({-1, -1}, {1, 1}), {16, 16});  // all occupancy zero
  const IFunctionalReport rep = i_functional_mc(spec, F);
  CHECK(rep.estimate == 0.0);
  CHECK(rep.target == 0.0);
  CHECK(rep.std_error == 0.0);
}

TEST_CASE("incidence estimate is reproducible bit for bit") {
  FlowSpec spec;
  spec.fam = full_family(1, 1, 1);
  spec.t = {0.1};
  spec.u = {0.0, 0.5};
  spec.samples = 20000;
  spec.seed = 42;
  const GridSet F = unit_square();
  const IFunctionalReport a = i_functional_mc(spec, F);
  const IFunctionalReport b = i_functional_mc(spec, F);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
  spec.seed = 43;
  const IFunctionalReport c = i_functional_mc(spec, F);
  CHECK(c.estimate != a.estimate);
}

TEST_CASE("x certificate box: generous passes, tight refutes") {
  FlowSpec spec;
  spec.fam = full_family(1, 1, 1);
  spec.t = {0.3};
  spec.u = {0.2, 0.1};
  spec.samples = 20000;
  spec.seed = 11;
  const GridSet F = unit_square();
  // Kept samples have |s| >= v_min, so |x| = |dy / s| <= span / v_min.
  spec.x_box = boxn({-1e7}, {1e7});
  CHECK_NOTHROW(i_functional_mc(spec, F));
  spec.x_box = boxn({-0.5}, {0.5});
  CHECK_THROWS_AS(i_functional_mc(spec, F), coverage_error);
}

TEST_CASE("s box must cover the derived support") {
  FlowSpec spec;
  spec.fam = full_family(1, 1, 1);
  spec.t = {0.0};
  spec.u = {0.0, 0.0};
  spec.samples = 1000;
  const GridSet F = unit_square();
  spec.s_box = boxn({-2}, {2});
  CHECK_NOTHROW(i_functional_mc(spec, F));
  spec.s_box = boxn({-0.1}, {0.1});  // F's t-extent is [-1.5, 1.5] relative to t
  CHECK_THROWS_AS(i_functional_mc(spec, F), coverage_error);
}

TEST_CASE("extremal sweep closed forms for the line family") {
  ExtremalFamily fam;
  fam.kind = ExtremalFamily::Kind::graded;
  fam.n = 1;
  fam.nprime = 1;
  fam.d = 1;
  fam.l = 1;
  for (int i = 0; i < 8; ++i) fam.deltas.push_back(std::ldexp(0.5, -i));
  const SweepReport rep = extremal_sweep(fam, full_exponents(1, 1, 1));
  CHECK(rep.K == 1);
  CHECK(rep.max_mc_rel_err <= 1e-12);
  // l = d: the level constraint is an equality, so the ratio slope vanishes.
  CHECK(rep.ratio_slope_exact == Rational(0));
  CHECK(std::abs(rep.ratio_slope) <= 1e-9);
  REQUIRE(rep.constraints.size() == 2);  // level 1, then primed
  CHECK(rep.constraints[0].l == 1);
  CHECK(rep.constraints[0].equality);
  CHECK(rep.constraints[0].lhs == Rational(4, 3));
  CHECK(rep.constraints[0].rhs == Rational(4, 3));
  CHECK(rep.constraints[1].l == 0);
  CHECK(rep.constraints[1].equality);
  // Fits on exact dyadic data reproduce the exact slopes.
  CHECK(rep.f_slope == doctest::Approx(rep.f_slope_exact.to_double()).epsilon(1e-9));
  CHECK(rep.g_slope == doctest::Approx(rep.g_slope_exact.to_double()).epsilon(1e-9));
}

TEST_CASE("sweep rejects bad delta grids") {
  ExtremalFamily fam;
  fam.deltas = {0.5, 0.25};  // too few
  CHECK_THROWS(extremal_sweep(fam, full_exponents(1, 1, 1)));
  fam.deltas = {0.5, 0.25, 0.3, 0.125, 0.0625};  // not decreasing
  CHECK_THROWS(extremal_sweep(fam, full_exponents(1, 1, 1)));
}

TEST_CASE("classified boundedness agrees with polygon membership") {
  struct Shape {
    int n, nprime, d;
  };
  for (const Shape sh : {Shape{1, 1, 2}, Shape{2, 1, 5}}) {
    const RieszPolygon poly = riesz_polygon(sh.n, sh.nprime, sh.d);
    for (int i = 1; i < 12; ++i)
      for (int j = 1; j < 12; ++j) {
        const Rational ip(i, 12), iq(j, 12);
        const BoundednessVerdict v = classify_point(sh.n, sh.nprime, sh.d, ip, iq);
        if (v.classification == BoundednessClass::critical) continue;  // dead band
        const bool inside = polygon_contains(poly, ip, iq);
        CHECK((v.classification == BoundednessClass::bounded_looking) == inside);
      }
  }
}

TEST_CASE("log growth closed forms") {
  LogGrowthSpec spec;
  spec.R = {8, 16, 32, 64, 128, 256};

  // Shells |x1 x2| in [1,2], |x1| in [1,R]: measure 4 ln R, slope 1.
  spec.beta = {{1, 1}, {1, 0}};
  spec.m = 1;
  {
    const LogGrowthReport rep = log_growth_fit(spec);
    REQUIRE(rep.measure.size() == spec.R.size());
    for (std::size_t i = 0; i < spec.R.size(); ++i)
      CHECK(rep.measure[i] == doctest::Approx(4 * std::log(spec.R[i])).epsilon(1e-12));
    CHECK(rep.scenario_ok);
    CHECK(rep.gamma_fit == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.gamma[0] == Rational(1));
    CHECK(rep.gamma[1] == Rational(0));
    CHECK(rep.det_b.abs() == Rational(1));
  }

  // Both shells capped at 2: constant measure 4, slope 0.
  spec.beta = {{1, 0}, {0, 1}};
  spec.m = 2;
  {
    const LogGrowthReport rep = log_growth_fit(spec);
    for (const double m : rep.measure) CHECK(m == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(rep.scenario_ok);
    CHECK(std::abs(rep.gamma_fit) <= 1e-9);
  }

  // Lebesgue slab: measure 4 (R-1)^2, and the log-law hypothesis fails.
  spec.m = 0;
  {
    const LogGrowthReport rep = log_growth_fit(spec);
    for (std::size_t i = 0; i < spec.R.size(); ++i) {
      const double r = spec.R[i];
      CHECK(rep.measure[i] == doctest::Approx(4 * (r - 1) * (r - 1)).epsilon(1e-12));
    }
    CHECK_FALSE(rep.scenario_ok);
    CHECK(rep.gamma_fit > 2.5);  // far from the log-law exponent n - m = 2
  }
}

TEST_CASE("log growth rejects dependent exponents and bad grids") {
  LogGrowthSpec spec;
  spec.beta = {{1, 1}, {2, 2}};
  spec.m = 0;
  spec.R = {8, 16, 32, 64, 128};
  CHECK_THROWS_AS(log_growth_fit(spec), std::domain_error);
  spec.beta = {{1, 0}, {0, 1}};
  spec.R = {8, 16, 32};  // too few points
  CHECK_THROWS_AS(log_growth_fit(spec), std::invalid_argument);
}
