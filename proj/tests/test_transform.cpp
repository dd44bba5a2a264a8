#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "polyxform/family.hpp"
#include "polyxform/sampled_function.hpp"
#include "polyxform/transform.hpp"

using namespace polyxform;

TEST_CASE("coefficient layout orders layer-major, dictionary inside") {
  const IndexFamily fam = full_family(1, 2, 1);
  const CoefficientLayout layout(fam);
  REQUIRE(layout.size() == 4);
  CHECK(layout.index({0}, 1) == 0);
  CHECK(layout.index({1}, 1) == 1);
  CHECK(layout.index({0}, 2) == 2);
  CHECK(layout.index({1}, 2) == 3);
  CHECK_THROWS_AS(layout.index({2}, 1), std::invalid_argument);
  CHECK_THROWS_AS(layout.index({0}, 3), std::invalid_argument);
}

TEST_CASE("graph point evaluates the polynomial curve") {
  const IndexFamily fam = full_family(1, 1, 2);  // y = u0 + u1 t + u2 t^2
  const ParamPoint u = {0.5, -1.0, 2.0};
  const auto p = graph_point(fam, u, {0.75});
  REQUIRE(p.size() == 2);
  CHECK(p[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.5 - 0.75 + 2 * 0.5625).epsilon(1e-14));
}

TEST_CASE("gauss-legendre nodes integrate polynomials of degree 2m-1") {
  for (int m = 1; m <= 6; ++m) {
    const auto& nw = gauss_legendre(m);
    REQUIRE(static_cast<int>(nw.size()) == m);
    double wsum = 0.0;
    for (const auto& [x, w] : nw) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-13));
    // Highest exactly integrated monomial: t^{2m-1} integrates to 0, t^{2m-2}
    // to 2/(2m-1).
    double odd = 0.0, even = 0.0;
    for (const auto& [x, w] : nw) {
      odd += w * std::pow(x, 2 * m - 1);
      even += w * std::pow(x, 2 * m - 2);
    }
    CHECK(std::abs(odd) <= 1e-13);
    CHECK(even == doctest::Approx(2.0 / (2 * m - 1)).epsilon(1e-12));
  }
  CHECK_THROWS(gauss_legendre(0));
  CHECK_THROWS(gauss_legendre(99));
}

TEST_CASE("transform of the box indicator counts covered t-length") {
  // (1,1,1): (T f)(u) integrates f(t, u0 + u1 t) dt. With f the indicator of
  // [0,1]^2 and the line y = 0.5, exactly t in [0,1] contributes 1.
  const IndexFamily fam = full_family(1, 1, 1);
  const SampledFunction f = preset_function("box", 2, 64);
  TransformOptions opts;
  opts.t_cells = 256;
  const double val = apply_T(fam, f, {0.5, 0.0}, opts);
  // The indicator has jump discontinuities at the box faces; interpolation
  // smears them over a cell, so the tolerance is loose.
  CHECK(val == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("transform of a gaussian matches the error-function closed form") {
  // (1,1,1) at u = (c, 0): integral exp(-t^2 - c^2) dt = sqrt(pi) exp(-c^2).
  const IndexFamily fam = full_family(1, 1, 1);
  const SampledFunction f = preset_function("gauss", 2, 24);
  TransformOptions opts;
  opts.gl_order = 8;
  opts.t_cells = 48;
  for (const double c : {0.0, 0.4, -1.1}) {
    const double val = apply_T(fam, f, {c, 0.0}, opts);
    CHECK(val == doctest::Approx(std::sqrt(M_PI) * std::exp(-c * c)).epsilon(1e-8));
  }
}

TEST_CASE("transform is linear and positive in f") {
  const IndexFamily fam = full_family(1, 1, 2);
  const SampledFunction g = preset_function("gauss", 2, 32);
  const ParamPoint u = {0.2, -0.3, 0.5};
  Box bigbox;
  bigbox.lo = {-6, -6};
  bigbox.hi = {6, 6};
  // A second smooth function on the same box and a combination of the two.
  const SampledFunction g2 = SampledFunction::sample(
      bigbox, {32, 32},
      [](const std::vector<double>& x) {
        const double dx = x[0] - 0.8, dy = x[1] + 0.4;
        return 0.7 * std::exp(-2 * (dx * dx + dy * dy));
      },
      true);
  const SampledFunction combo = SampledFunction::sample(
      bigbox, {32, 32}, [&](const std::vector<double>& x) { return 2 * g(x) + 3 * g2(x); }, true);
  TransformOptions opts;
  opts.gl_order = 6;
  opts.t_cells = 64;
  const double tg = apply_T(fam, g, u, opts);
  const double t2 = apply_T(fam, g2, u, opts);
  const double tc = apply_T(fam, combo, u, opts);
  CHECK(tg > 0.0);
  CHECK(t2 > 0.0);
  CHECK(tc == doctest::Approx(2 * tg + 3 * t2).epsilon(1e-10));
  CHECK(apply_T(fam, preset_function("bump", 2, 16), u) > 0.0);
}

TEST_CASE("quadrature refinement converges on the gaussian") {
  // The presets carry analytic evaluators, so the only error is the composite
  // Gauss-Legendre rule; halving the cell width at order 4 cuts it ~2^8.
  const IndexFamily fam = full_family(1, 1, 2);
  const ParamPoint u = {0.1, 0.4, -0.2};
  const SampledFunction f = preset_function("gauss", 2, 24);
  TransformOptions coarse, fine, refopt;
  coarse.t_cells = 6;
  fine.t_cells = 12;
  refopt.t_cells = 96;
  refopt.gl_order = 8;
  const double ref = apply_T(fam, f, u, refopt);
  const double ec = std::abs(apply_T(fam, f, u, coarse) - ref);
  const double ef = std::abs(apply_T(fam, f, u, fine) - ref);
  CHECK(ec <= 1e-2);
  CHECK(ef <= std::max(ec / 16, 1e-11));
}

TEST_CASE("translation covariance: function shift equals coefficient image") {
  const IndexFamily fam = full_family(1, 1, 2);
  const SampledFunction f = preset_function("gauss", 2, 20);
  const ParamPoint u = {0.3, -0.2, 0.6};
  const std::vector<double> h = {0.35};
  const std::vector<double> hp = {-0.15};
  const SampledFunction fs = translate_function(f, 1, h, hp);
  const ParamPoint us = translate_coefficients(fam, u, h, hp);
  TransformOptions opts;
  opts.t_cells = 64;
  opts.gl_order = 6;
  // T[f(. + h, . + h')](u) = T[f](translated u): substituting s = t + h in
  // the defining integral maps one to the other exactly.
  const double lhs = apply_T(fam, fs, u, opts);
  const double rhs = apply_T(fam, f, us, opts);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
}

TEST_CASE("translate_coefficients binomial redistribution") {
  // Recentring y = u0 + u1 t + u2 t^2 at t - h (plus the h' offset):
  // u2' = u2, u1' = u1 - 2 h u2, u0' = u0 - u1 h + u2 h^2 + h'.
  const IndexFamily fam = full_family(1, 1, 2);
  const ParamPoint u = {1.0, 2.0, 3.0};
  const double h = 0.5, hp = 10.0;
  const ParamPoint v = translate_coefficients(fam, u, {h}, {hp});
  CHECK(v[2] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(2.0 - 2 * h * 3.0).epsilon(1e-15));
  CHECK(v[0] == doctest::Approx(1.0 - 2.0 * h + 3.0 * h * h + hp).epsilon(1e-15));
}

TEST_CASE("identity dilation is exact") {
  const IndexFamily fam = full_family(1, 1, 1);
  const SampledFunction f = preset_function("gauss", 2, 12);
  DilationSpec spec;
  spec.delta = {1.0};
  spec.delta_prime = {1.0};
  const DilationReport rep = dilation_check(fam, f, spec, {0.2, 0.1});
  CHECK(rep.rel_err == 0.0);
  CHECK(rep.norm_rel_err == 0.0);
}

TEST_CASE("dilate_coefficients applies the covariance weights") {
  const IndexFamily fam = full_family(1, 1, 2);
  DilationSpec spec;
  spec.delta = {2.0};
  spec.delta_prime = {3.0};
  const ParamPoint v = dilate_coefficients(fam, {1.0, 1.0, 1.0}, spec);
  CHECK(v[0] == doctest::Approx(3.0).epsilon(1e-15));           // delta' * delta^0
  CHECK(v[1] == doctest::Approx(1.5).epsilon(1e-15));           // 3 / 2
  CHECK(v[2] == doctest::Approx(0.75).epsilon(1e-15));          // 3 / 4
}

TEST_CASE("dilation covariance holds on the lattice-compatible scales") {
  const IndexFamily fam = full_family(1, 1, 1);
  const SampledFunction f = preset_function("gauss", 2, 24);
  DilationSpec spec;
  spec.delta = {0.5};
  spec.delta_prime = {2.0};
  TransformOptions opts;
  opts.gl_order = 6;
  opts.t_cells = 64;
  const DilationReport rep = dilation_check(fam, f, spec, {0.25, -0.4}, 2.0, opts);
  CHECK(rep.rel_err <= 1e-7);
  CHECK(rep.norm_rel_err <= 1e-12);  // norms reuse the same samples exactly
}

TEST_CASE("mixed second difference degenerates to a plain second difference") {
  const IndexFamily fam = full_family(1, 1, 2);
  const SampledFunction f = preset_function("gauss", 2, 20);
  const ParamPoint u = {0.1, 0.2, 0.05};
  SecondDifference sd;
  sd.alpha = {1};
  sd.j = 1;
  sd.beta = {1};
  sd.k = 1;
  const double h = 0.05;
  const double mixed = mixed_second_difference(fam, f, u, sd, h);
  // Same slot twice: (F(u + 2h e) - 2 F(u) + F(u - 2h e)) / (4 h^2).
  const CoefficientLayout layout(fam);
  const int slot = layout.index({1}, 1);
  ParamPoint up = u, um = u;
  up[static_cast<std::size_t>(slot)] += 2 * h;
  um[static_cast<std::size_t>(slot)] -= 2 * h;
  const double plain =
      (apply_T(fam, f, up) - 2 * apply_T(fam, f, u) + apply_T(fam, f, um)) / (4 * h * h);
  CHECK(mixed == doctest::Approx(plain).epsilon(1e-10));
}

TEST_CASE("john residual validates its preconditions") {
  const IndexFamily fam = full_family(1, 1, 2);
  const SampledFunction f = preset_function("gauss", 2, 12);
  const ParamPoint u = {0.0, 0.0, 0.0};
  SecondDifference sd1{{1}, 1, {1}, 1};
  SecondDifference sd2{{0}, 1, {2}, 1};
  CHECK_NOTHROW(john_residual(fam, f, u, sd1, sd2, 0.1));
  SecondDifference bad{{0}, 1, {1}, 1};  // index sum differs from sd1
  CHECK_THROWS_AS(john_residual(fam, f, u, sd1, bad, 0.1), std::invalid_argument);
}

TEST_CASE("factorization through an intermediate degree") {
  const SampledFunction f = preset_function("gauss", 2, 24);
  TransformOptions opts;
  opts.gl_order = 6;
  opts.t_cells = 48;
  const ParamPoint u = {0.2, -0.1, 0.3};  // full (1,1,2) layout
  const FactorizationReport rep = factorization_check(1, 1, 2, 1, f, u, opts);
  CHECK(rep.rel_err <= 1e-3);
  CHECK_THROWS(factorization_check(1, 1, 2, 3, f, u, opts));  // j out of range
}
