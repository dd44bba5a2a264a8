#pragma once

#include <utility>
#include <vector>

#include "polyxform/family.hpp"
#include "polyxform/sampled_function.hpp"

namespace polyxform {

// Coefficient vectors are flat doubles in a canonical order: layer-major
// (j = 1 .. nprime), dictionary order within each layer. CoefficientLayout
// translates between (alpha, j) pairs and flat slots.
using ParamPoint = std::vector<double>;

class CoefficientLayout {
 public:
  explicit CoefficientLayout(const IndexFamily& fam);

  int size() const { return static_cast<int>(order_.size()); }
  // Flat slot of (alpha, j), j 1-based. Throws std::invalid_argument when the
  // pair is not in the family.
  int index(const MultiIndex& alpha, int j) const;
  const std::vector<std::pair<MultiIndex, int>>& order() const { return order_; }

 private:
  std::vector<std::pair<MultiIndex, int>> order_;
};

// The point (t, y) in R^{n+nprime} swept by the graph map: component j of y
// is sum over layer j of u_{(alpha,j)} t^alpha.
std::vector<double> graph_point(const IndexFamily& fam, const ParamPoint& u,
                                const std::vector<double>& t);

// Gauss-Legendre nodes/weights on [-1, 1]. Cached per order; order 1..16.
const std::vector<std::pair<double, double>>& gauss_legendre(int order);

struct TransformOptions {
  int gl_order = 4;  // Gauss-Legendre points per cell per axis
  int t_cells = 0;   // integration cells per t axis; 0 = function grid + pad
};

// The averaging transform (Tf)(u) = integral of f(graph_point(u, t)) dt over
// the t-range of f's box, padded by one cell. Composite Gauss-Legendre per
// cell, parallel over cells.
double apply_T(const IndexFamily& fam, const SampledFunction& f, const ParamPoint& u,
               const TransformOptions& opts = {});

struct DilationSpec {
  std::vector<double> delta;        // per t axis, positive
  std::vector<double> delta_prime;  // per curve component, positive
};

// f_{delta}(x, y) = f(delta. x, delta'. y): box rescaled, samples reused (the
// center lattice maps onto itself), analytic evaluator wrapped if present.
SampledFunction dilate_function(const SampledFunction& f, int n, const DilationSpec& spec);

// u_{(alpha,j)} -> delta'_j delta^{-alpha} u_{(alpha,j)}.
ParamPoint dilate_coefficients(const IndexFamily& fam, const ParamPoint& u,
                               const DilationSpec& spec);

struct DilationReport {
  double lhs = 0.0;  // T(f_delta) at u
  double rhs = 0.0;  // prod(delta)^{-1} T(f) at the rescaled coefficients
  double rel_err = 0.0;
  double norm_lhs = 0.0;  // ||f_delta||_p
  double norm_rhs = 0.0;  // (prod delta prod delta')^{-1/p} ||f||_p
  double norm_rel_err = 0.0;
};

// Checks the scaling covariance of T and the L^p rescaling of f in one pass.
DilationReport dilation_check(const IndexFamily& fam, const SampledFunction& f,
                              const DilationSpec& spec, const ParamPoint& u, double p = 2.0,
                              const TransformOptions& opts = {});

// One mixed second-difference stencil in coefficient space.
struct SecondDifference {
  MultiIndex alpha;
  int j = 1;
  MultiIndex beta;
  int k = 1;
};

double mixed_second_difference(const IndexFamily& fam, const SampledFunction& f,
                               const ParamPoint& u, const SecondDifference& sd, double h,
                               const TransformOptions& opts = {});

// Difference of the two stencils; the structural identity says this tends to
// zero like h^2 whenever alpha1 + beta1 == alpha2 + beta2 with matching
// layers. Those preconditions are validated.
double john_residual(const IndexFamily& fam, const SampledFunction& f, const ParamPoint& u,
                     const SecondDifference& sd1, const SecondDifference& sd2, double h,
                     const TransformOptions& opts = {});

struct FactorizationReport {
  double lhs = 0.0;  // degree-d transform of f
  double rhs = 0.0;  // degree-j transform of the partially summed function
  double rel_err = 0.0;
};

// The full degree-d transform evaluated two ways: directly, and through the
// degree-j transform of t -> f(t, x + sum_{|alpha| > j} u_alpha t^alpha).
// Requires 1 <= j <= d; coefficient layouts are those of the full families.
FactorizationReport factorization_check(int n, int nprime, int d, int j, const SampledFunction& f,
                                        const ParamPoint& u, const TransformOptions& opts = {});

// Coefficient image of the translation f(x, y) -> f(x + h, y + h'): binomial
// redistribution down the degrees plus h' on the constant slot. Full families
// only (the redistribution must stay inside the family).
ParamPoint translate_coefficients(const IndexFamily& fam, const ParamPoint& u,
                                  const std::vector<double>& h, const std::vector<double>& hprime);

// f(x + h, y + h') as a SampledFunction: box shifted by (-h, -h').
SampledFunction translate_function(const SampledFunction& f, int n, const std::vector<double>& h,
                                   const std::vector<double>& hprime);

}  // namespace polyxform
