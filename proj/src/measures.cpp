#include "polyxform/measures.hpp"

#include <cmath>
#include <stdexcept>

#include "polyxform/parallel.hpp"

namespace polyxform {

void MonomialWeight::validate(int dim) const {
  if (static_cast<int>(s.size()) != dim) throw std::invalid_argument("weight rank mismatch");
  for (double v : s)
    if (!(v > 0.0)) throw std::invalid_argument("weight exponents must be positive");
}

namespace {

// integral of |x|^{s-1} from a to b: F(b) - F(a), F(x) = sign(x)|x|^s / s.
inline double weight_antiderivative(double x, double s) {
  return (x < 0 ? -1.0 : 1.0) * std::pow(std::fabs(x), s) / s;
}

double cell_weighted_volume(const GridSet& E, const MonomialWeight& w, std::int64_t flat) {
  const auto idx = E.unflatten(flat);
  double v = 1.0;
  for (int i = 0; i < E.dim(); ++i) {
    const double lo = E.box().lo[static_cast<std::size_t>(i)] +
                      static_cast<double>(idx[static_cast<std::size_t>(i)]) * E.cell_width(i);
    const double hi = lo + E.cell_width(i);
    v *= weight_antiderivative(hi, w.s[static_cast<std::size_t>(i)]) -
         weight_antiderivative(lo, w.s[static_cast<std::size_t>(i)]);
  }
  return v;
}

}  // namespace

double monomial_measure(const GridSet& E, const MonomialWeight& w) {
  w.validate(E.dim());
  return par::sum(E.cell_count(), [&](std::int64_t i) {
    const double occ = E.occupancy(i);
    return occ == 0.0 ? 0.0 : occ * cell_weighted_volume(E, w, i);
  });
}

namespace ref {

double monomial_measure(const GridSet& E, const MonomialWeight& w) {
  w.validate(E.dim());
  double total = 0.0;
  for (std::int64_t i = 0; i < E.cell_count(); ++i) {
    const double occ = E.occupancy(i);
    if (occ != 0.0) total += occ * cell_weighted_volume(E, w, i);
  }
  return total;
}

}  // namespace ref

void ExtremalShape::validate() const {
  const std::size_t n = v.size();
  if (n == 0 || a.size() != n) throw std::invalid_argument("extremal shape: rank mismatch");
  for (const auto& row : v)
    if (row.size() != n) throw std::invalid_argument("extremal shape: v must be square");
  for (double ai : a)
    if (!(ai > 0.0)) throw std::invalid_argument("extremal shape: scales must be positive");
}

namespace {

// Solve M x = b by partial-pivot elimination; returns the solution and the
// absolute determinant, throwing when the pivot-growth condition estimate
// blows past 1e10.
std::vector<double> solve_dense(std::vector<std::vector<double>> m, std::vector<double> b,
                                double* abs_det) {
  const std::size_t n = m.size();
  double det = 1.0;
  double max_entry = 0.0, min_pivot = HUGE_VAL;
  for (const auto& row : m)
    for (double v : row) max_entry = std::max(max_entry, std::fabs(v));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0) throw std::domain_error("singular matrix");
    if (piv != c) {
      std::swap(m[piv], m[c]);
      std::swap(b[piv], b[c]);
      det = -det;
    }
    det *= m[c][c];
    min_pivot = std::min(min_pivot, std::fabs(m[c][c]));
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      b[r] -= f * b[c];
    }
  }
  if (max_entry / min_pivot > 1e10) throw std::runtime_error("matrix too ill-conditioned");
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t k = r + 1; k < n; ++k) acc -= m[r][k] * x[k];
    x[r] = acc / m[r][r];
  }
  if (abs_det) *abs_det = std::fabs(det);
  return x;
}

}  // namespace

std::vector<double> solve_sigma(const ExtremalShape& shape, const MonomialWeight& w) {
  shape.validate();
  const std::size_t n = shape.v.size();
  w.validate(static_cast<int>(n));
  // columns are the v_j: M[i][j] = v_j[i]
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = shape.v[j][i];
  auto sigma = solve_dense(std::move(m), w.s, nullptr);
  for (double s : sigma)
    if (!(s > 0.0)) throw std::domain_error("weight not in the interior of the exponent cone");
  return sigma;
}

double extremal_measure(const ExtremalShape& shape, const MonomialWeight& w) {
  const auto sigma = solve_sigma(shape, w);
  const std::size_t n = shape.v.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = shape.v[j][i];
  double abs_det = 0.0;
  solve_dense(std::move(m), std::vector<double>(n, 0.0), &abs_det);

  double log_result = static_cast<double>(n) * std::log(2.0) - std::log(abs_det);
  double sigma_total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    log_result += sigma[j] * std::log(shape.a[j]) + std::lgamma(sigma[j]);
    sigma_total += sigma[j];
  }
  log_result -= std::lgamma(1.0 + sigma_total);
  return std::exp(log_result);
}

InterpolationCheck interpolation_check(const GridSet& E, const std::vector<MonomialWeight>& w,
                                       const std::vector<double>& theta) {
  const int n = E.dim();
  const std::size_t N = w.size();
  if (N == 0 || theta.size() != N) throw std::invalid_argument("interpolation_check: rank mismatch");
  double theta0 = 1.0;
  for (double t : theta) {
    if (!(t > 0.0)) throw std::invalid_argument("interpolation_check: theta_j must be positive");
    theta0 -= t;
  }
  if (!(theta0 > 0.0)) throw std::invalid_argument("interpolation_check: need sum theta_j < 1");
  for (const auto& wj : w) wj.validate(n);

  InterpolationCheck out;
  out.s.assign(static_cast<std::size_t>(n), 0.0);
  for (std::size_t j = 0; j < N; ++j)
    for (int i = 0; i < n; ++i)
      out.s[static_cast<std::size_t>(i)] += theta[j] * w[j].s[static_cast<std::size_t>(i)];

  MonomialWeight ws{out.s};
  out.lhs = monomial_measure(E, ws);

  double log_prod = 0.0;
  for (std::size_t j = 0; j < N; ++j) log_prod += theta[j] * std::log(monomial_measure(E, w[j]));

  if (N == static_cast<std::size_t>(n)) {
    std::vector<std::vector<double>> m(N, std::vector<double>(N));
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c) m[r][c] = w[r].s[c];
    double W = 0.0;
    solve_dense(std::move(m), std::vector<double>(N, 0.0), &W);
    if (!(W > 0.0)) throw std::domain_error("interpolation_check: dependent weights");
    double log_c = static_cast<double>(n) * theta0 * std::log(2.0);
    log_c -= theta0 * std::log(theta0);
    for (double t : theta) log_c -= t * std::log(t);
    double bracket = -std::log(W) - std::lgamma(1.0 / theta0);
    for (double t : theta) bracket += std::lgamma(t / theta0);
    log_c += theta0 * bracket;
    out.constant = std::exp(log_c);
    out.explicit_constant = true;
    out.rhs = out.constant * std::exp(log_prod);
    // Slack: weighted content of partially occupied cells, under s.
    GridSet boundary(E.box(), E.resolution(), E.quantum_bits());
    for (std::int64_t i = 0; i < E.cell_count(); ++i) {
      const double o = E.occupancy(i);
      if (o > 0.0 && o < 1.0) boundary.set_occupancy(i, 1.0);
    }
    out.inflation = monomial_measure(boundary, ws);
    // Equality cases sit exactly on the boundary; tolerate the last few ulps.
    out.holds = out.lhs <= out.rhs + out.inflation + 1e-12 * (1.0 + out.lhs);
  } else {
    // No explicit constant beyond n weights; report the observed ratio.
    out.constant = out.lhs / std::exp(log_prod);
    out.explicit_constant = false;
    out.rhs = out.lhs;
    out.holds = true;
  }
  return out;
}

}  // namespace polyxform
