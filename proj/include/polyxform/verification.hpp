#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyxform/admissibility.hpp"
#include "polyxform/family.hpp"
#include "polyxform/gridset.hpp"
#include "polyxform/rational.hpp"
#include "polyxform/transform.hpp"

namespace polyxform {

// ---------------------------------------------------------------------------
// Kernel flow maps. The incidence identity composes a time shift with a
// coefficient shear and lands back on graph points; keeping the two flows as
// named functions makes the Monte Carlo oracle read like the formula it
// estimates.
// ---------------------------------------------------------------------------

// Slots of the reduced set: the family minus the constant pair of each layer,
// layer-major and dictionary-ordered (the x of the right flow lives here).
// Requires the zero multiindex in every layer.
std::vector<std::pair<MultiIndex, int>> reduced_order(const IndexFamily& fam);

// Time shift (t, u) -> (t + s, u); returns t + s.
std::vector<double> left_flow(const std::vector<double>& t, const std::vector<double>& s);

// Coefficient shear: the constant slot of layer j absorbs
// -sum_{beta in layer j minus 0} x_beta t^beta and every other slot gains its
// x entry, so the graph point at t itself is unchanged. x follows
// reduced_order(fam).
ParamPoint right_flow(const IndexFamily& fam, const ParamPoint& u, const std::vector<double>& x,
                      const std::vector<double>& t);

// ---------------------------------------------------------------------------
// Incidence identity oracle: the integral of |V| against the product of
// indicator pullbacks equals measure(F)^{#A-1}, independent of the base
// point. Estimated by stratified Monte Carlo with the y-image parametrized
// directly (see FlowSpec::x_box).
// ---------------------------------------------------------------------------

struct FlowSpec {
  IndexFamily fam;
  std::vector<double> t;  // base point in R^n
  ParamPoint u;           // base coefficients, CoefficientLayout order
  std::int64_t samples = 1'000'000;  // rounded up to a multiple of strata
  std::uint64_t seed = 1;
  int strata = 64;      // equal-width strata on the first s coordinate
  double v_min = 1e-6;  // samples with prod_k |det A_k| below this are skipped
  // Optional s sampling box; must contain the derived cover (the t-extent of
  // F shifted to the base point), else a coverage error is thrown.
  std::optional<Box> s_box;
  // Optional certificate box for the shear coordinates. x is not sampled
  // from a box: each sample solves for the unique x hitting a uniformly drawn
  // point of F's y-extent, which covers the support exactly and sidesteps the
  // unbounded x-support near degenerate time shifts. When x_box is supplied,
  // every visited x is checked against it and a violation raises a coverage
  // error, certifying or refuting the box a vanilla sampler would need.
  std::optional<Box> x_box;
};

struct IFunctionalReport {
  double estimate = 0.0;
  double std_error = 0.0;
  double target = 0.0;            // measure(F)^{#A-1}
  double truncation_bound = 0.0;  // estimated mass excluded by the v_min cutoff
  double skipped_fraction = 0.0;  // fraction of samples under the cutoff
  std::int64_t samples = 0;       // effective count after stratum rounding
  std::uint64_t seed = 0;
  std::string to_json() const;
};

// Throws admissibility_error unless the family has equal layer sizes and the
// zero multiindex in every layer; coverage_error per FlowSpec.
IFunctionalReport i_functional_mc(const FlowSpec& spec, const GridSet& F);

// ---------------------------------------------------------------------------
// Scaling sweeps on the two extremal families of sets. All measures and
// pairings have closed forms; the sweep tabulates them on a delta grid,
// cross-checks the pairing by quadrature at sampled coefficients, fits
// log-log slopes, and evaluates the induced exponent constraints in exact
// rational arithmetic.
// ---------------------------------------------------------------------------

struct ExtremalFamily {
  enum class Kind {
    graded,  // t-box delta, curve tube C delta^l, coefficient box graded by degree
    primed,  // t-box of unit scale, tube C delta, coefficient box delta
  };
  Kind kind = Kind::graded;
  int n = 1, nprime = 1, d = 1;
  int l = 1;      // graded level, 1..d (ignored for primed)
  double C = 0;   // tube constant; <= 0 resolves to card(M_{n,d}) + 1
  std::vector<double> deltas;  // strictly decreasing in (0,1), at least 5
  std::uint64_t seed = 1;      // for the quadrature cross-check draws
};

struct SweepRow {
  double delta = 0;
  double pairing = 0;     // closed form, exact constants included
  double f_measure = 0;   // |F_delta|
  double g_measure = 0;   // |G_delta|
  double ratio = 0;       // pairing / (|F|^{1/p} |G|^{1/q'})
  double pairing_mc = 0;  // quadrature cross-check of the pairing
};

struct ConstraintCheck {
  int l = 0;  // level, or 0 for the primed constraint
  Rational lhs, rhs;
  bool holds = false;
  bool equality = false;
};

struct SweepReport {
  ExtremalFamily family;  // echo, with C resolved
  std::int64_t K = 0;     // delta exponent of |G|
  double pairing_slope = 0, f_slope = 0, g_slope = 0, ratio_slope = 0;
  Rational pairing_slope_exact, f_slope_exact, g_slope_exact, ratio_slope_exact;
  std::vector<SweepRow> rows;
  std::vector<ConstraintCheck> constraints;  // levels 1..d, then primed (l=0)
  double max_mc_rel_err = 0.0;

  std::string to_csv() const;  // delta, pairing, F_measure, G_measure, ratio
  std::string to_json() const;
  std::string to_svg() const;  // log-log plot of the table columns
};

// Log-log slope fits discard the largest delta (transient); configurable.
SweepReport extremal_sweep(const ExtremalFamily& family, const ExponentPair& pq,
                           int discard_largest = 1);

enum class BoundednessClass { bounded_looking, critical, diverging };

struct BoundednessVerdict {
  Rational slope_exact;
  double slope_fit = 0.0;
  BoundednessClass classification = BoundednessClass::critical;
  std::string to_json() const;
};

// r(delta) of one extremal family at the exponent point (1/p, 1/q): slope of
// log r vs log delta, classified by sign with a +-1/50 dead band. slope >= 0
// means the ratio stays bounded as delta -> 0 (no obstruction from this
// family); slope < 0 exhibits divergence.
BoundednessVerdict boundedness_ratio_sweep(const ExtremalFamily& family, const Rational& inv_p,
                                           const Rational& inv_q);

// Worst slope over all graded levels 1..d plus the primed family, exact
// arithmetic only. Agrees with polygon membership at rational points.
BoundednessVerdict classify_point(int n, int nprime, int d, const Rational& inv_p,
                                  const Rational& inv_q);

// ---------------------------------------------------------------------------
// Log growth of monomial sublevel shells: the measure of
//   {x : 1 <= |x^{beta_j}| <= 2 (j <= m), 1 <= |x^{beta_j}| <= R (j > m)}
// in closed form via the monomial change of variables, with the exact
// exponents gamma solving B^T gamma = 1.
// ---------------------------------------------------------------------------

struct LogGrowthSpec {
  std::vector<MultiIndex> beta;  // n independent exponent vectors of length n
  int m = 0;                     // first m shells capped at 2, the rest at R
  std::vector<double> R;         // increasing grid, > 1, at least 5 points
};

struct LogGrowthReport {
  std::vector<double> R;
  std::vector<double> measure;
  std::vector<Rational> gamma;  // exact, B^T gamma = 1
  Rational det_b;               // exact det of the exponent matrix
  double gamma_fit = 0.0;       // slope of log measure vs log log R
  bool scenario_ok = false;     // 1 in span(beta_1..beta_m): the log law applies
  std::string to_json() const;
};

// Throws std::domain_error on dependent exponent vectors, invalid_argument on
// a bad R grid or m.
LogGrowthReport log_growth_fit(const LogGrowthSpec& spec);

}  // namespace polyxform
