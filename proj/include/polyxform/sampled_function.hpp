#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "polyxform/gridset.hpp"

namespace polyxform {

// A compactly supported function on a box, stored as cell-center samples on a
// uniform grid (row-major, same layout as GridSet occupancies). Evaluation
// interpolates between centers and extends by zero outside the box, so the
// function is defined on all of R^dim. An optional analytic evaluator can be
// attached; when present it wins over interpolation (still truncated to the
// box), which keeps transform tests free of interpolation error where that
// matters.
class SampledFunction {
 public:
  enum class Interp {
    multilinear,  // continuous, exact on the samples
    bspline3,     // cubic B-spline blend: C^2, smooths rather than interpolates
  };

  using Evaluator = std::function<double(const std::vector<double>&)>;

  SampledFunction() = default;
  SampledFunction(Box box, std::vector<int> resolution, Interp interp = Interp::multilinear);

  // Samples fn at every cell center. keep_analytic attaches fn as the exact
  // evaluator as well.
  static SampledFunction sample(Box box, std::vector<int> resolution, const Evaluator& fn,
                                bool keep_analytic = false, Interp interp = Interp::multilinear);

  int dim() const { return static_cast<int>(res_.size()); }
  const Box& box() const { return box_; }
  const std::vector<int>& resolution() const { return res_; }
  std::int64_t cell_count() const { return static_cast<std::int64_t>(values_.size()); }
  double cell_width(int axis) const;
  double cell_volume() const;
  std::vector<double> cell_center(std::int64_t flat) const;

  const std::vector<double>& values() const { return values_; }
  double& value(std::int64_t flat) { return values_[static_cast<std::size_t>(flat)]; }
  double value(std::int64_t flat) const { return values_[static_cast<std::size_t>(flat)]; }

  Interp interp() const { return interp_; }
  void set_interp(Interp i) { interp_ = i; }
  bool has_analytic() const { return static_cast<bool>(analytic_); }
  const Evaluator& analytic() const { return analytic_; }
  void set_analytic(Evaluator fn) { analytic_ = std::move(fn); }
  void clear_analytic() { analytic_ = nullptr; }

  // Point evaluation: analytic if attached, else interpolation of the samples;
  // identically zero outside the box either way.
  double operator()(const std::vector<double>& x) const;

  // True when every cell touching the box boundary holds a zero sample, i.e.
  // the stored data respects the compact-support contract with one cell of
  // margin. Quadrature and dilation identities assume this.
  bool support_shell_clear() const;

  // Cell-center quadrature norm (sum |v|^p * cellvol)^{1/p} of the samples;
  // p = infinity gives max |v|. Requires p >= 1.
  double lp_norm(double p) const;

  // Same binary layout as GridSet (u32 dim, f64 lo/hi per axis, u32 res per
  // axis) with the payload widened to f64 samples.
  void write_binary(std::ostream& os) const;
  static SampledFunction read_binary(std::istream& is);

 private:
  std::int64_t flatten(const std::vector<int>& idx) const;

  Box box_;
  std::vector<int> res_;
  std::vector<double> values_;
  Interp interp_ = Interp::multilinear;
  Evaluator analytic_;
};

// Named test functions used across the transform checks. dim = n + nprime.
//   "gauss"  exp(-|x|^2) with an analytic evaluator, box [-6, 6]^dim
//   "box"    indicator of [0, 1]^dim, box [-0.5, 1.5]^dim (samples only)
//   "bump"   e * exp(-1/(1 - |x|^2)) on |x| < 1, box [-1.2, 1.2]^dim, analytic
SampledFunction preset_function(const std::string& name, int dim, int res_per_axis);

}  // namespace polyxform
