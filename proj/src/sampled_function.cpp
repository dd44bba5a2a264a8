#include "polyxform/sampled_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "polyxform/parallel.hpp"

namespace polyxform {

SampledFunction::SampledFunction(Box box, std::vector<int> resolution, Interp interp)
    : box_(std::move(box)), res_(std::move(resolution)), interp_(interp) {
  box_.validate();
  if (static_cast<int>(res_.size()) != box_.dim())
    throw std::invalid_argument("sampled function: resolution rank != box dim");
  std::int64_t total = 1;
  for (int r : res_) {
    if (r < 1) throw std::invalid_argument("sampled function: resolution must be >= 1");
    total *= r;
  }
  values_.assign(static_cast<std::size_t>(total), 0.0);
}

SampledFunction SampledFunction::sample(Box box, std::vector<int> resolution, const Evaluator& fn,
                                        bool keep_analytic, Interp interp) {
  SampledFunction f(std::move(box), std::move(resolution), interp);
  auto& vals = f.values_;
  par::for_each(f.cell_count(), [&](std::int64_t i) {
    vals[static_cast<std::size_t>(i)] = fn(f.cell_center(i));
  });
  if (keep_analytic) f.analytic_ = fn;
  return f;
}

double SampledFunction::cell_width(int axis) const {
  const auto a = static_cast<std::size_t>(axis);
  return (box_.hi[a] - box_.lo[a]) / res_[a];
}

double SampledFunction::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= cell_width(i);
  return v;
}

std::int64_t SampledFunction::flatten(const std::vector<int>& idx) const {
  std::int64_t flat = 0;
  for (int i = 0; i < dim(); ++i) flat = flat * res_[static_cast<std::size_t>(i)] + idx[static_cast<std::size_t>(i)];
  return flat;
}

std::vector<double> SampledFunction::cell_center(std::int64_t flat) const {
  std::vector<double> c(static_cast<std::size_t>(dim()));
  for (int i = dim() - 1; i >= 0; --i) {
    const auto a = static_cast<std::size_t>(i);
    c[a] = box_.lo[a] + (static_cast<double>(flat % res_[a]) + 0.5) * cell_width(i);
    flat /= res_[a];
  }
  return c;
}

namespace {

// Uniform cubic B-spline basis on supports [-2, 2], evaluated piecewise for
// the four samples bracketing t in [0, 1).
void bspline3_weights(double t, double w[4]) {
  const double t2 = t * t, t3 = t2 * t;
  w[0] = (1.0 - 3.0 * t + 3.0 * t2 - t3) / 6.0;
  w[1] = (4.0 - 6.0 * t2 + 3.0 * t3) / 6.0;
  w[2] = (1.0 + 3.0 * t + 3.0 * t2 - 3.0 * t3) / 6.0;
  w[3] = t3 / 6.0;
}

}  // namespace

double SampledFunction::operator()(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim())
    throw std::invalid_argument("sampled function: wrong point dimension");
  for (int i = 0; i < dim(); ++i) {
    const auto a = static_cast<std::size_t>(i);
    if (x[a] < box_.lo[a] || x[a] > box_.hi[a]) return 0.0;
  }
  if (analytic_) return analytic_(x);

  const int taps = interp_ == Interp::multilinear ? 2 : 4;
  // Per-axis sample indices and blend weights; out-of-range indices read 0.
  std::vector<int> base(static_cast<std::size_t>(dim()));
  std::vector<double> w(static_cast<std::size_t>(dim()) * 4);
  for (int i = 0; i < dim(); ++i) {
    const auto a = static_cast<std::size_t>(i);
    const double u = (x[a] - box_.lo[a]) / cell_width(i) - 0.5;
    const double fl = std::floor(u);
    const double t = u - fl;
    const int i0 = static_cast<int>(fl);
    if (interp_ == Interp::multilinear) {
      base[a] = i0;
      w[a * 4 + 0] = 1.0 - t;
      w[a * 4 + 1] = t;
    } else {
      base[a] = i0 - 1;
      bspline3_weights(t, &w[a * 4]);
    }
  }

  std::vector<int> tap(static_cast<std::size_t>(dim()), 0);
  double acc = 0.0;
  while (true) {
    double weight = 1.0;
    std::int64_t flat = 0;
    bool inside = true;
    for (int i = 0; i < dim() && inside; ++i) {
      const auto a = static_cast<std::size_t>(i);
      const int idx = base[a] + tap[a];
      if (idx < 0 || idx >= res_[a]) {
        inside = false;
        break;
      }
      weight *= w[a * 4 + static_cast<std::size_t>(tap[a])];
      flat = flat * res_[a] + idx;
    }
    if (inside) acc += weight * values_[static_cast<std::size_t>(flat)];
    int axis = dim() - 1;
    while (axis >= 0) {
      if (++tap[static_cast<std::size_t>(axis)] < taps) break;
      tap[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return acc;
}

bool SampledFunction::support_shell_clear() const {
  for (std::int64_t flat = 0; flat < cell_count(); ++flat) {
    std::int64_t rem = flat;
    bool shell = false;
    for (int i = dim() - 1; i >= 0; --i) {
      const auto a = static_cast<std::size_t>(i);
      const std::int64_t idx = rem % res_[a];
      rem /= res_[a];
      if (idx == 0 || idx == res_[a] - 1) shell = true;
    }
    if (shell && values_[static_cast<std::size_t>(flat)] != 0.0) return false;
  }
  return true;
}

double SampledFunction::lp_norm(double p) const {
  const auto& vals = values_;
  if (p == std::numeric_limits<double>::infinity()) {
    double m = 0.0;
    for (double v : vals) m = std::max(m, std::fabs(v));
    return m;
  }
  if (!(p >= 1.0)) throw std::domain_error("lp_norm requires p >= 1");
  const double cv = cell_volume();
  const double s = par::sum(cell_count(), [&vals, p](std::int64_t i) {
    return std::pow(std::fabs(vals[static_cast<std::size_t>(i)]), p);
  });
  return std::pow(s * cv, 1.0 / p);
}

void SampledFunction::write_binary(std::ostream& os) const {
  const std::uint32_t n = static_cast<std::uint32_t>(dim());
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (int i = 0; i < dim(); ++i) {
    os.write(reinterpret_cast<const char*>(&box_.lo[static_cast<std::size_t>(i)]), sizeof(double));
    os.write(reinterpret_cast<const char*>(&box_.hi[static_cast<std::size_t>(i)]), sizeof(double));
  }
  for (int r : res_) {
    const std::uint32_t v = static_cast<std::uint32_t>(r);
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  for (double v : values_) os.write(reinterpret_cast<const char*>(&v), sizeof v);
  if (!os) throw std::runtime_error("sampled function: write failed");
}

SampledFunction SampledFunction::read_binary(std::istream& is) {
  std::uint32_t n = 0;
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!is || n == 0 || n > 16) throw std::runtime_error("sampled function: bad header");
  Box box;
  box.lo.resize(n);
  box.hi.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    is.read(reinterpret_cast<char*>(&box.lo[i]), sizeof(double));
    is.read(reinterpret_cast<char*>(&box.hi[i]), sizeof(double));
  }
  std::vector<int> res(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    res[i] = static_cast<int>(v);
  }
  if (!is) throw std::runtime_error("sampled function: truncated header");
  SampledFunction f(std::move(box), std::move(res));
  for (auto& v : f.values_) is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("sampled function: truncated body");
  return f;
}

SampledFunction preset_function(const std::string& name, int dim, int res_per_axis) {
  if (dim < 1 || dim > 8) throw std::invalid_argument("preset: dim out of range");
  if (res_per_axis < 4) throw std::invalid_argument("preset: resolution too small");
  std::vector<int> res(static_cast<std::size_t>(dim), res_per_axis);
  Box box;
  box.lo.assign(static_cast<std::size_t>(dim), 0.0);
  box.hi.assign(static_cast<std::size_t>(dim), 0.0);

  if (name == "gauss") {
    for (int i = 0; i < dim; ++i) {
      box.lo[static_cast<std::size_t>(i)] = -6.0;
      box.hi[static_cast<std::size_t>(i)] = 6.0;
    }
    return SampledFunction::sample(
        std::move(box), std::move(res),
        [](const std::vector<double>& x) {
          double r2 = 0.0;
          for (double c : x) r2 += c * c;
          return std::exp(-r2);
        },
        /*keep_analytic=*/true);
  }
  if (name == "box") {
    for (int i = 0; i < dim; ++i) {
      box.lo[static_cast<std::size_t>(i)] = -0.5;
      box.hi[static_cast<std::size_t>(i)] = 1.5;
    }
    return SampledFunction::sample(
        std::move(box), std::move(res),
        [](const std::vector<double>& x) {
          for (double c : x)
            if (c < 0.0 || c > 1.0) return 0.0;
          return 1.0;
        },
        /*keep_analytic=*/true);
  }
  if (name == "bump") {
    for (int i = 0; i < dim; ++i) {
      box.lo[static_cast<std::size_t>(i)] = -1.2;
      box.hi[static_cast<std::size_t>(i)] = 1.2;
    }
    return SampledFunction::sample(
        std::move(box), std::move(res),
        [](const std::vector<double>& x) {
          double r2 = 0.0;
          for (double c : x) r2 += c * c;
          if (r2 >= 1.0) return 0.0;
          return std::exp(1.0 - 1.0 / (1.0 - r2));
        },
        /*keep_analytic=*/true);
  }
  throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace polyxform
