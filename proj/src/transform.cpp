#include "polyxform/transform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "polyxform/multiindex.hpp"
#include "polyxform/parallel.hpp"

namespace polyxform {

CoefficientLayout::CoefficientLayout(const IndexFamily& fam) {
  fam.validate();
  const auto layers = fam.layers();
  for (int j = 1; j <= fam.nprime; ++j)
    for (const auto& alpha : layers[static_cast<std::size_t>(j - 1)]) order_.emplace_back(alpha, j);
}

int CoefficientLayout::index(const MultiIndex& alpha, int j) const {
  for (std::size_t i = 0; i < order_.size(); ++i)
    if (order_[i].second == j && order_[i].first == alpha) return static_cast<int>(i);
  throw std::invalid_argument("coefficient layout: pair is not in the family");
}

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

double monomial_at(const double* t, const MultiIndex& a) {
  double r = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) r *= ipow(t[i], a[i]);
  return r;
}

// Pre-resolved layers + layout, shared by every quadrature node of one call.
struct GraphEvaluator {
  int n;
  std::vector<std::vector<MultiIndex>> layers;
  const ParamPoint* u;

  GraphEvaluator(const IndexFamily& fam, const ParamPoint& coeffs)
      : n(fam.n), layers(fam.layers()), u(&coeffs) {
    std::size_t total = 0;
    for (const auto& layer : layers) total += layer.size();
    if (coeffs.size() != total)
      throw std::invalid_argument("coefficient vector has " + std::to_string(coeffs.size()) +
                                  " entries, family has " + std::to_string(total) + " pairs");
  }

  // point must have n + layers.size() slots; fills (t, y).
  void operator()(const double* t, std::vector<double>& point) const {
    for (int i = 0; i < n; ++i) point[static_cast<std::size_t>(i)] = t[i];
    std::size_t slot = 0;
    for (std::size_t j = 0; j < layers.size(); ++j) {
      double y = 0.0;
      for (const auto& alpha : layers[j]) y += (*u)[slot++] * monomial_at(t, alpha);
      point[static_cast<std::size_t>(n) + j] = y;
    }
  }
};

}  // namespace

std::vector<double> graph_point(const IndexFamily& fam, const ParamPoint& u,
                                const std::vector<double>& t) {
  if (static_cast<int>(t.size()) != fam.n)
    throw std::invalid_argument("graph_point: t has wrong dimension");
  GraphEvaluator ev(fam, u);
  std::vector<double> point(static_cast<std::size_t>(fam.n + fam.nprime));
  ev(t.data(), point);
  return point;
}

const std::vector<std::pair<double, double>>& gauss_legendre(int order) {
  if (order < 1 || order > 16) throw std::invalid_argument("gauss_legendre: order 1..16");
  static const auto tables = [] {
    std::vector<std::vector<std::pair<double, double>>> all(17);
    for (int q = 1; q <= 16; ++q) {
      auto& tab = all[static_cast<std::size_t>(q)];
      for (int i = 0; i < q; ++i) {
        // Newton from the Chebyshev-like initial guess; P_q via recurrence.
        double x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
          double p0 = 1.0, p1 = x;
          if (q == 1) p1 = x;
          for (int k = 2; k <= q; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
          }
          double pq = (q == 1) ? x : p1;
          double pq1 = (q == 1) ? 1.0 : p0;
          dp = q * (x * pq - pq1) / (x * x - 1.0);
          double dx = pq / dp;
          x -= dx;
          if (std::fabs(dx) < 1e-15) break;
        }
        tab.emplace_back(x, 2.0 / ((1.0 - x * x) * dp * dp));
      }
      std::sort(tab.begin(), tab.end());
    }
    return all;
  }();
  return tables[static_cast<std::size_t>(order)];
}

double apply_T(const IndexFamily& fam, const SampledFunction& f, const ParamPoint& u,
               const TransformOptions& opts) {
  const int n = fam.n;
  if (f.dim() != fam.n + fam.nprime)
    throw std::invalid_argument("apply_T: function dimension != n + nprime");
  for (int i = 0; i < f.dim(); ++i) {
    const auto a = static_cast<std::size_t>(i);
    if (!std::isfinite(f.box().lo[a]) || !std::isfinite(f.box().hi[a]))
      throw std::domain_error("apply_T: unbounded effective t-domain");
  }
  GraphEvaluator ev(fam, u);

  // The graph's first n coordinates are t itself, so f's t-extent covers the
  // effective domain; one-cell padding guards the support boundary.
  std::vector<double> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
  std::vector<int> cells(static_cast<std::size_t>(n));
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) {
    const auto a = static_cast<std::size_t>(i);
    const double w = f.cell_width(i);
    lo[a] = f.box().lo[a] - w;
    hi[a] = f.box().hi[a] + w;
    cells[a] = opts.t_cells > 0 ? opts.t_cells : f.resolution()[a] + 2;
    total *= cells[a];
  }
  const auto& gl = gauss_legendre(opts.gl_order);
  const int q = static_cast<int>(gl.size());

  std::int64_t nodes_per_cell = 1;
  for (int i = 0; i < n; ++i) nodes_per_cell *= q;

  return par::sum(total, [&](std::int64_t flat) {
    std::vector<double> a(static_cast<std::size_t>(n)), mid(static_cast<std::size_t>(n)),
        half(static_cast<std::size_t>(n));
    std::int64_t rem = flat;
    for (int i = n - 1; i >= 0; --i) {
      const auto ai = static_cast<std::size_t>(i);
      const std::int64_t ci = rem % cells[ai];
      rem /= cells[ai];
      const double w = (hi[ai] - lo[ai]) / cells[ai];
      a[ai] = lo[ai] + ci * w;
      mid[ai] = a[ai] + 0.5 * w;
      half[ai] = 0.5 * w;
    }
    std::vector<double> t(static_cast<std::size_t>(n));
    std::vector<double> point(static_cast<std::size_t>(f.dim()));
    double acc = 0.0;
    for (std::int64_t node = 0; node < nodes_per_cell; ++node) {
      std::int64_t nr = node;
      double weight = 1.0;
      for (int i = n - 1; i >= 0; --i) {
        const auto ai = static_cast<std::size_t>(i);
        const int k = static_cast<int>(nr % q);
        nr /= q;
        t[ai] = mid[ai] + half[ai] * gl[static_cast<std::size_t>(k)].first;
        weight *= half[ai] * gl[static_cast<std::size_t>(k)].second;
      }
      ev(t.data(), point);
      acc += weight * f(point);
    }
    return acc;
  });
}

SampledFunction dilate_function(const SampledFunction& f, int n, const DilationSpec& spec) {
  if (static_cast<int>(spec.delta.size()) != n ||
      static_cast<int>(spec.delta_prime.size()) != f.dim() - n)
    throw std::invalid_argument("dilation spec rank mismatch");
  std::vector<double> scale(static_cast<std::size_t>(f.dim()));
  for (int i = 0; i < f.dim(); ++i) {
    const auto a = static_cast<std::size_t>(i);
    scale[a] = i < n ? spec.delta[a] : spec.delta_prime[a - static_cast<std::size_t>(n)];
    if (!(scale[a] > 0.0)) throw std::invalid_argument("dilation factors must be positive");
  }
  Box box = f.box();
  for (int i = 0; i < f.dim(); ++i) {
    const auto a = static_cast<std::size_t>(i);
    box.lo[a] /= scale[a];
    box.hi[a] /= scale[a];
  }
  SampledFunction g(std::move(box), f.resolution(), f.interp());
  // The center lattice of the rescaled box is the image of the original
  // lattice, so the samples carry over unchanged.
  for (std::int64_t i = 0; i < f.cell_count(); ++i) g.value(i) = f.value(i);
  if (f.has_analytic()) {
    auto inner = f.analytic();
    g.set_analytic([inner, scale](const std::vector<double>& x) {
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = scale[i] * x[i];
      return inner(y);
    });
  }
  return g;
}

ParamPoint dilate_coefficients(const IndexFamily& fam, const ParamPoint& u,
                               const DilationSpec& spec) {
  if (static_cast<int>(spec.delta.size()) != fam.n ||
      static_cast<int>(spec.delta_prime.size()) != fam.nprime)
    throw std::invalid_argument("dilation spec rank mismatch");
  CoefficientLayout layout(fam);
  if (static_cast<int>(u.size()) != layout.size())
    throw std::invalid_argument("coefficient vector size mismatch");
  ParamPoint out(u.size());
  for (std::size_t s = 0; s < u.size(); ++s) {
    const auto& [alpha, j] = layout.order()[s];
    double factor = spec.delta_prime[static_cast<std::size_t>(j - 1)];
    for (std::size_t i = 0; i < alpha.size(); ++i) factor /= ipow(spec.delta[i], alpha[i]);
    out[s] = factor * u[s];
  }
  return out;
}

namespace {

double rel_diff(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) / scale;
}

}  // namespace

DilationReport dilation_check(const IndexFamily& fam, const SampledFunction& f,
                              const DilationSpec& spec, const ParamPoint& u, double p,
                              const TransformOptions& opts) {
  DilationReport rep;
  const SampledFunction fd = dilate_function(f, fam.n, spec);
  rep.lhs = apply_T(fam, fd, u, opts);
  double dprod = 1.0, full_prod = 1.0;
  for (double d : spec.delta) {
    dprod *= d;
    full_prod *= d;
  }
  for (double d : spec.delta_prime) full_prod *= d;
  rep.rhs = apply_T(fam, f, dilate_coefficients(fam, u, spec), opts) / dprod;
  rep.rel_err = rel_diff(rep.lhs, rep.rhs);

  rep.norm_lhs = fd.lp_norm(p);
  rep.norm_rhs = std::pow(full_prod, -1.0 / p) * f.lp_norm(p);
  rep.norm_rel_err = rel_diff(rep.norm_lhs, rep.norm_rhs);
  return rep;
}

double mixed_second_difference(const IndexFamily& fam, const SampledFunction& f,
                               const ParamPoint& u, const SecondDifference& sd, double h,
                               const TransformOptions& opts) {
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  CoefficientLayout layout(fam);
  const int s1 = layout.index(sd.alpha, sd.j);
  const int s2 = layout.index(sd.beta, sd.k);

  // Smoothness matters for second differences: grid-mode functions are bumped
  // to the C^2 interpolant unless the caller already chose it.
  const SampledFunction* use = &f;
  SampledFunction smoothed;
  if (!f.has_analytic() && f.interp() == SampledFunction::Interp::multilinear) {
    smoothed = f;
    smoothed.set_interp(SampledFunction::Interp::bspline3);
    use = &smoothed;
  }

  auto T_at = [&](double d1, double d2) {
    ParamPoint v = u;
    v[static_cast<std::size_t>(s1)] += d1;
    v[static_cast<std::size_t>(s2)] += d2;
    return apply_T(fam, *use, v, opts);
  };
  if (s1 == s2) {
    // Same slot: the mixed stencil degenerates to a plain second difference
    // with doubled step.
    return (T_at(h, h) - 2.0 * T_at(0.0, 0.0) + T_at(-h, -h)) / (4.0 * h * h);
  }
  return (T_at(h, h) - T_at(h, -h) - T_at(-h, h) + T_at(-h, -h)) / (4.0 * h * h);
}

double john_residual(const IndexFamily& fam, const SampledFunction& f, const ParamPoint& u,
                     const SecondDifference& sd1, const SecondDifference& sd2, double h,
                     const TransformOptions& opts) {
  MultiIndex sum1 = sd1.alpha, sum2 = sd2.alpha;
  if (sd1.alpha.size() != sd1.beta.size() || sum1.size() != sum2.size() ||
      sd2.alpha.size() != sd2.beta.size())
    throw std::invalid_argument("john_residual: multiindex ranks differ");
  for (std::size_t i = 0; i < sum1.size(); ++i) {
    sum1[i] += sd1.beta[i];
    sum2[i] += sd2.beta[i];
  }
  if (sum1 != sum2)
    throw std::invalid_argument("john_residual: multiindex sums differ between the stencils");
  const auto pair1 = std::minmax(sd1.j, sd1.k);
  const auto pair2 = std::minmax(sd2.j, sd2.k);
  if (pair1 != pair2)
    throw std::invalid_argument("john_residual: layer pairs differ between the stencils");
  return mixed_second_difference(fam, f, u, sd1, h, opts) -
         mixed_second_difference(fam, f, u, sd2, h, opts);
}

FactorizationReport factorization_check(int n, int nprime, int d, int j, const SampledFunction& f,
                                        const ParamPoint& u, const TransformOptions& opts) {
  if (j < 1 || j > d) throw std::invalid_argument("factorization: need 1 <= j <= d");
  const IndexFamily fam_d = full_family(n, nprime, d);
  const IndexFamily fam_j = full_family(n, nprime, j);
  CoefficientLayout layout_d(fam_d), layout_j(fam_j);
  if (static_cast<int>(u.size()) != layout_d.size())
    throw std::invalid_argument("coefficient vector size mismatch");

  FactorizationReport rep;
  rep.lhs = apply_T(fam_d, f, u, opts);

  // Tail coefficients |alpha| > j, per curve component.
  std::vector<std::vector<std::pair<MultiIndex, double>>> tail(
      static_cast<std::size_t>(nprime));
  ParamPoint head(static_cast<std::size_t>(layout_j.size()), 0.0);
  for (int s = 0; s < layout_d.size(); ++s) {
    const auto& [alpha, comp] = layout_d.order()[static_cast<std::size_t>(s)];
    if (degree(alpha) > j)
      tail[static_cast<std::size_t>(comp - 1)].emplace_back(alpha,
                                                            u[static_cast<std::size_t>(s)]);
    else
      head[static_cast<std::size_t>(layout_j.index(alpha, comp))] = u[static_cast<std::size_t>(s)];
  }

  // Inflate the y-extent by a bound on the tail shift over the t-range so the
  // wrapper's box still contains its support.
  Box wbox = f.box();
  std::vector<double> tmax(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto a = static_cast<std::size_t>(i);
    const double w = f.cell_width(i);
    tmax[a] = std::max(std::fabs(f.box().lo[a] - w), std::fabs(f.box().hi[a] + w));
  }
  for (int k = 0; k < nprime; ++k) {
    double bound = 0.0;
    for (const auto& [alpha, coeff] : tail[static_cast<std::size_t>(k)]) {
      double m = std::fabs(coeff);
      for (std::size_t i = 0; i < alpha.size(); ++i) m *= ipow(tmax[i], alpha[i]);
      bound += m;
    }
    wbox.lo[static_cast<std::size_t>(n + k)] -= bound;
    wbox.hi[static_cast<std::size_t>(n + k)] += bound;
  }

  const SampledFunction* fp = &f;
  SampledFunction wrapper(wbox, f.resolution());
  wrapper.set_analytic([fp, n, nprime, &tail](const std::vector<double>& x) {
    std::vector<double> y(x);
    for (int k = 0; k < nprime; ++k) {
      double shift = 0.0;
      for (const auto& [alpha, coeff] : tail[static_cast<std::size_t>(k)])
        shift += coeff * monomial_at(x.data(), alpha);
      y[static_cast<std::size_t>(n + k)] += shift;
    }
    return (*fp)(y);
  });

  rep.rhs = apply_T(fam_j, wrapper, head, opts);
  rep.rel_err = rel_diff(rep.lhs, rep.rhs);
  return rep;
}

namespace {

bool is_full(const IndexFamily& fam) {
  const auto want = enumerate_multiindices(fam.n, fam.d);
  for (const auto& layer : fam.layers())
    if (layer != want) return false;
  return true;
}

}  // namespace

ParamPoint translate_coefficients(const IndexFamily& fam, const ParamPoint& u,
                                  const std::vector<double>& h,
                                  const std::vector<double>& hprime) {
  if (!is_full(fam))
    throw std::invalid_argument(
        "translation is defined here only for full families: recentring can leave a proper "
        "index set");
  if (static_cast<int>(h.size()) != fam.n || static_cast<int>(hprime.size()) != fam.nprime)
    throw std::invalid_argument("translation vector rank mismatch");
  CoefficientLayout layout(fam);
  if (static_cast<int>(u.size()) != layout.size())
    throw std::invalid_argument("coefficient vector size mismatch");

  // sum_alpha u_alpha (t - h)^alpha + h' regrouped by powers of t: the beta
  // slot collects binom(alpha, beta) (-h)^{alpha-beta} from every alpha >=
  // beta componentwise.
  ParamPoint out(u.size(), 0.0);
  for (int sb = 0; sb < layout.size(); ++sb) {
    const auto& [beta, j] = layout.order()[static_cast<std::size_t>(sb)];
    double acc = degree(beta) == 0 ? hprime[static_cast<std::size_t>(j - 1)] : 0.0;
    for (int sa = 0; sa < layout.size(); ++sa) {
      const auto& [alpha, ja] = layout.order()[static_cast<std::size_t>(sa)];
      if (ja != j) continue;
      bool ge = true;
      for (std::size_t i = 0; i < alpha.size(); ++i)
        if (alpha[i] < beta[i]) {
          ge = false;
          break;
        }
      if (!ge) continue;
      double term = u[static_cast<std::size_t>(sa)];
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        term *= static_cast<double>(binomial(alpha[i], beta[i]));
        term *= ipow(-h[i], alpha[i] - beta[i]);
      }
      acc += term;
    }
    out[static_cast<std::size_t>(sb)] = acc;
  }
  return out;
}

SampledFunction translate_function(const SampledFunction& f, int n, const std::vector<double>& h,
                                   const std::vector<double>& hprime) {
  if (static_cast<int>(h.size()) != n ||
      static_cast<int>(hprime.size()) != f.dim() - n)
    throw std::invalid_argument("translation vector rank mismatch");
  Box box = f.box();
  for (int i = 0; i < f.dim(); ++i) {
    const auto a = static_cast<std::size_t>(i);
    const double s = i < n ? h[a] : hprime[a - static_cast<std::size_t>(n)];
    box.lo[a] -= s;
    box.hi[a] -= s;
  }
  SampledFunction g(std::move(box), f.resolution(), f.interp());
  for (std::int64_t i = 0; i < f.cell_count(); ++i) g.value(i) = f.value(i);
  if (f.has_analytic()) {
    auto inner = f.analytic();
    std::vector<double> shift(static_cast<std::size_t>(f.dim()));
    for (int i = 0; i < f.dim(); ++i) {
      const auto a = static_cast<std::size_t>(i);
      shift[a] = i < n ? h[a] : hprime[a - static_cast<std::size_t>(n)];
    }
    g.set_analytic([inner, shift](const std::vector<double>& x) {
      std::vector<double> y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + shift[i];
      return inner(y);
    });
  }
  return g;
}

}  // namespace polyxform
