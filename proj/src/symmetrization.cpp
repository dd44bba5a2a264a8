#include "polyxform/symmetrization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

#include "polyxform/errors.hpp"
#include "polyxform/multiindex.hpp"
#include "polyxform/parallel.hpp"

namespace polyxform {

GridSet steiner(const GridSet& E, int axis) {
  const int n = E.dim();
  if (axis < 0 || axis >= n) throw std::invalid_argument("steiner: axis out of range");
  const int qb = E.quantum_bits();
  if (qb + 1 > 52) throw std::invalid_argument("steiner: occupancy quantum exhausted");
  GridSet out(E.box(), E.resolution(), qb + 1);
  const std::int64_t K = E.resolution()[static_cast<std::size_t>(axis)];
  const std::int64_t nlines = E.cell_count() / K;
  par::for_each(nlines, [&](std::int64_t line) {
    std::vector<std::int64_t> idx(static_cast<std::size_t>(n), 0);
    std::int64_t rem = line;
    for (int i = n - 1; i >= 0; --i) {
      if (i == axis) continue;
      const std::int64_t r = E.resolution()[static_cast<std::size_t>(i)];
      idx[static_cast<std::size_t>(i)] = rem % r;
      rem /= r;
    }
    const std::int64_t base = E.flatten(idx);
    std::int64_t step = 1;
    for (int i = axis + 1; i < n; ++i) step *= E.resolution()[static_cast<std::size_t>(i)];
    std::uint64_t mass = 0;
    for (std::int64_t i = 0; i < K; ++i)
      mass += static_cast<std::uint64_t>(std::llround(std::ldexp(E.occupancy(base + i * step), qb)));
    // one cell = 2^(qb+1) half-quantum units; interval = [K*2^qb - mass, K*2^qb + mass]
    const std::int64_t unit_per_cell = static_cast<std::int64_t>(1) << (qb + 1);
    const std::int64_t left = K * (static_cast<std::int64_t>(1) << qb) - static_cast<std::int64_t>(mass);
    const std::int64_t right = K * (static_cast<std::int64_t>(1) << qb) + static_cast<std::int64_t>(mass);
    for (std::int64_t i = 0; i < K; ++i) {
      const std::int64_t clo = i * unit_per_cell;
      const std::int64_t chi = clo + unit_per_cell;
      const std::int64_t ov = std::max<std::int64_t>(0, std::min(chi, right) - std::max(clo, left));
      out.set_occupancy(base + i * step, std::ldexp(static_cast<double>(ov), -(qb + 1)));
    }
  });
  return out;
}

GridSet full_symmetrize(const GridSet& E) {
  GridSet cur = E;
  for (int axis = 0; axis < E.dim(); ++axis) cur = steiner(cur, axis);
  return cur;
}

double Poly::eval(double t) const {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i].to_double();
  return acc;
}

Rational Poly::eval_exact(const Rational& t) const {
  Rational acc;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
  return acc;
}

Poly Poly::derivative() const {
  Poly d;
  for (std::size_t i = 1; i < c.size(); ++i)
    d.c.push_back(c[i] * Rational(static_cast<std::int64_t>(i)));
  return d;
}

Poly Poly::antiderivative() const {
  Poly F;
  F.c.push_back(Rational(0));
  for (std::size_t i = 0; i < c.size(); ++i)
    F.c.push_back(c[i] / Rational(static_cast<std::int64_t>(i + 1)));
  return F;
}

std::string Poly::str() const {
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].sign() == 0 && c.size() > 1) continue;
    if (!first) os << " + ";
    os << c[i].str();
    if (i >= 1) os << "*t";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  if (first) return "0";
  return os.str();
}

namespace {

// Nearest dyadic rationals bracketing x at 2^-bits resolution.
Rational dyadic_floor(double x, int bits) {
  const double scaled = std::floor(std::ldexp(x, bits));
  if (std::abs(scaled) > 9.0e15) throw std::invalid_argument("interval endpoint too large");
  return Rational(static_cast<std::int64_t>(scaled), static_cast<std::int64_t>(1) << bits);
}

Rational dyadic_ceil(double x, int bits) {
  const double scaled = std::ceil(std::ldexp(x, bits));
  if (std::abs(scaled) > 9.0e15) throw std::invalid_argument("interval endpoint too large");
  return Rational(static_cast<std::int64_t>(scaled), static_cast<std::int64_t>(1) << bits);
}

// Bernstein coefficients of the degree-m power-basis polynomial G on [0,1]:
// b_i = sum_{j<=i} C(i,j)/C(m,j) G_j.
std::vector<Rational> bernstein_from_power(const std::vector<Rational>& G) {
  const std::size_t m = G.size() - 1;
  std::vector<Rational> b(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    Rational acc;
    for (std::size_t j = 0; j <= i; ++j) {
      acc += G[j] * Rational(binomial(static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)),
                             binomial(static_cast<std::int64_t>(m), static_cast<std::int64_t>(j)));
    }
    b[i] = acc;
  }
  return b;
}

// Positivity certificate by subdivision. b_0 and b_m are the exact endpoint
// values, so a negative one is a genuine witness against the bound.
void certify_nonneg(const std::vector<Rational>& b, int depth, int max_depth) {
  bool all_nonneg = true;
  for (const auto& v : b)
    if (v.sign() < 0) {
      all_nonneg = false;
      break;
    }
  if (all_nonneg) return;
  if (b.front().sign() < 0 || b.back().sign() < 0)
    throw certification_error("derivative bound fails: k-th derivative drops below 1 on the interval");
  if (depth >= max_depth)
    throw certification_error("derivative bound inconclusive: subdivision depth exhausted");
  const std::size_t m = b.size() - 1;
  std::vector<Rational> left(m + 1), right(m + 1), row = b;
  const Rational half(1, 2);
  left[0] = row[0];
  right[m] = row[m];
  for (std::size_t r = 1; r <= m; ++r) {
    for (std::size_t i = 0; i + r <= m; ++i) row[i] = (row[i] + row[i + 1]) * half;
    left[r] = row[0];
    right[m - r] = row[m - r];
  }
  certify_nonneg(left, depth + 1, max_depth);
  certify_nonneg(right, depth + 1, max_depth);
}

}  // namespace

void certify_derivative_bound(const SmoothTestFunction& fn, int max_depth) {
  if (fn.k < 1) throw std::invalid_argument("derivative order must be >= 1");
  if (!(fn.a < fn.b)) throw std::invalid_argument("empty certification interval");
  Poly g = fn.f;
  for (int i = 0; i < fn.k; ++i) g = g.derivative();
  if (g.c.empty()) g.c.push_back(Rational(0));
  g.c[0] -= Rational(1);

  // Certify on a dyadic superset of [a, b]; conservative in the right direction.
  const Rational lo = dyadic_floor(fn.a, 20);
  Rational hi = dyadic_ceil(fn.b, 20);
  if (!(lo < hi)) hi += Rational(1, 1 << 20);

  try {
    if (g.deg() == 0) {
      if (g.c[0].sign() < 0)
        throw certification_error("derivative bound fails: k-th derivative is constant below 1");
      return;
    }
    // Power coefficients of g(lo + (hi-lo) s) on s in [0,1]: Taylor shift by
    // lo, then scale degree j by (hi-lo)^j.
    std::vector<Rational> G = g.c;
    const std::size_t m = G.size() - 1;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = m - 1; j + 1 > i; --j) G[j] += G[j + 1] * lo;
    const Rational w = hi - lo;
    Rational wj(1);
    for (std::size_t j = 1; j <= m; ++j) {
      wj *= w;
      G[j] *= wj;
    }
    certify_nonneg(bernstein_from_power(G), 0, max_depth);
  } catch (const std::overflow_error&) {
    throw certification_error("derivative bound inconclusive: exact arithmetic budget exhausted");
  }
}

SublevelConstant sublevel_constant(int k) {
  if (k < 1 || k > 8) throw std::invalid_argument("sublevel constant defined here for 1 <= k <= 8");
  SublevelConstant sc;
  sc.k = k;
  sc.j0 = (k % 2 == 0) ? k / 2 : (k + 1) / 2;
  auto fact = [](int v) {
    std::int64_t f = 1;
    for (int i = 2; i <= v; ++i) f *= i;
    return f;
  };
  auto ipow = [](std::int64_t base, int e) {
    __int128 p = 1;
    for (int i = 0; i < e; ++i) p *= base;
    if (p > INT64_MAX) throw std::overflow_error("sublevel constant overflow");
    return static_cast<std::int64_t>(p);
  };
  const Rational num(ipow(2, k) * fact(sc.j0) * fact(k - sc.j0));
  const Rational den(ipow(k, k));
  const Rational den2(ipow(k + 1, k));
  sc.c = num / (den * den2);
  return sc;
}

namespace {

// Integral of |f| over [lo, hi]: locate sign changes by scan + bisection,
// then sum |F(seg end) - F(seg start)| over the sign-constant segments.
double abs_integral(const Poly& f, const Poly& F, double lo, double hi) {
  constexpr int kScan = 8;
  std::vector<double> cuts{lo};
  double prev_t = lo;
  double prev_v = f.eval(lo);
  for (int i = 1; i <= kScan; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / kScan;
    const double v = f.eval(t);
    if (v == 0.0 && i < kScan) {
      // Root exactly on a scan node: cut there directly (the sign-flip test
      // below would miss it on both sides).
      cuts.push_back(t);
    } else if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0)) {
      double a = prev_t, b = t, va = prev_v;
      for (int it = 0; it < 80 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
        const double mid = 0.5 * (a + b);
        const double vm = f.eval(mid);
        if ((va < 0.0) == (vm < 0.0)) {
          a = mid;
          va = vm;
        } else {
          b = mid;
        }
      }
      cuts.push_back(0.5 * (a + b));
    }
    prev_t = t;
    prev_v = v;
  }
  cuts.push_back(hi);
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s)
    total += std::abs(F.eval(cuts[s + 1]) - F.eval(cuts[s]));
  return total;
}

}  // namespace

SublevelCheck sublevel_check(const SmoothTestFunction& fn, const GridSet& E) {
  if (E.dim() != 1) throw std::invalid_argument("sublevel check needs a 1-d set");
  if (E.box().lo[0] < fn.a - 1e-12 || E.box().hi[0] > fn.b + 1e-12)
    throw std::invalid_argument("set leaves the certified interval");
  certify_derivative_bound(fn);

  const Poly F = fn.f.antiderivative();
  const std::int64_t K = E.resolution()[0];
  const double cell = (E.box().hi[0] - E.box().lo[0]) / static_cast<double>(K);

  SublevelCheck out;
  out.lhs = par::sum(K, [&](std::int64_t i) {
    const double occ = E.occupancy(i);
    if (occ == 0.0) return 0.0;
    const double lo = E.box().lo[0] + cell * static_cast<double>(i);
    return occ * abs_integral(fn.f, F, lo, lo + cell);
  });
  // Partial cells only say how much of the cell is occupied, not where. The
  // worst-case placement shift of the |f| integral is below the full cell
  // integral, which is what we allow.
  out.slack = par::sum(K, [&](std::int64_t i) {
    const double occ = E.occupancy(i);
    if (occ == 0.0 || occ == 1.0) return 0.0;
    const double lo = E.box().lo[0] + cell * static_cast<double>(i);
    return abs_integral(fn.f, F, lo, lo + cell);
  });

  // The symmetrized set is the origin-centered interval of the same measure m;
  // integral of c_k |t|^k / k! over it has the closed form below.
  const double m = E.measure();
  const SublevelConstant sc = sublevel_constant(fn.k);
  double kfact = 1.0;
  for (int i = 2; i <= fn.k; ++i) kfact *= static_cast<double>(i);
  out.rhs =
      sc.c.to_double() / kfact * 2.0 * std::pow(0.5 * m, fn.k + 1) / static_cast<double>(fn.k + 1);

  out.holds = out.lhs + out.slack + 1e-12 * (1.0 + out.rhs) >= out.rhs;
  return out;
}

}  // namespace polyxform
