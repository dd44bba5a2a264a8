#include "polyxform/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "polyxform/errors.hpp"
#include "polyxform/multiindex.hpp"
#include "polyxform/parallel.hpp"
#include "polyxform/rng.hpp"

namespace polyxform {

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

bool is_zero(const MultiIndex& a) {
  for (int v : a)
    if (v != 0) return false;
  return true;
}

// LU with partial pivoting on a row-major k*k block. Returns the determinant;
// factors and the pivot permutation stay behind for solves.
double lu_factor(double* m, int* perm, int k) {
  for (int i = 0; i < k; ++i) perm[i] = i;
  double det = 1.0;
  for (int col = 0; col < k; ++col) {
    int piv = col;
    double best = std::fabs(m[col * k + col]);
    for (int r = col + 1; r < k; ++r) {
      const double v = std::fabs(m[r * k + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != col) {
      for (int c = 0; c < k; ++c) std::swap(m[piv * k + c], m[col * k + c]);
      std::swap(perm[piv], perm[col]);
      det = -det;
    }
    det *= m[col * k + col];
    for (int r = col + 1; r < k; ++r) {
      const double f = m[r * k + col] / m[col * k + col];
      m[r * k + col] = f;
      for (int c = col + 1; c < k; ++c) m[r * k + c] -= f * m[col * k + c];
    }
  }
  return det;
}

void lu_solve(const double* m, const int* perm, int k, const double* rhs, double* x) {
  for (int i = 0; i < k; ++i) x[i] = rhs[perm[i]];
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < i; ++j) x[i] -= m[i * k + j] * x[j];
  for (int i = k - 1; i >= 0; --i) {
    for (int j = i + 1; j < k; ++j) x[i] -= m[i * k + j] * x[j];
    x[i] /= m[i * k + i];
  }
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace

std::vector<std::pair<MultiIndex, int>> reduced_order(const IndexFamily& fam) {
  const auto layers = fam.layers();
  std::vector<std::pair<MultiIndex, int>> out;
  for (int j = 1; j <= fam.nprime; ++j) {
    const auto& layer = layers[static_cast<std::size_t>(j - 1)];
    bool has_zero = false;
    for (const auto& alpha : layer) {
      if (is_zero(alpha))
        has_zero = true;
      else
        out.emplace_back(alpha, j);
    }
    if (!has_zero) throw admissibility_error("nondegeneracy");
  }
  return out;
}

std::vector<double> left_flow(const std::vector<double>& t, const std::vector<double>& s) {
  if (t.size() != s.size()) throw std::invalid_argument("left_flow: rank mismatch");
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i] + s[i];
  return out;
}

ParamPoint right_flow(const IndexFamily& fam, const ParamPoint& u, const std::vector<double>& x,
                      const std::vector<double>& t) {
  const auto reduced = reduced_order(fam);
  if (x.size() != reduced.size())
    throw std::invalid_argument("right_flow: x must follow the reduced slot order");
  if (static_cast<int>(t.size()) != fam.n) throw std::invalid_argument("right_flow: t rank");
  CoefficientLayout layout(fam);
  if (static_cast<int>(u.size()) != layout.size())
    throw std::invalid_argument("right_flow: coefficient vector size mismatch");

  ParamPoint out = u;
  const MultiIndex zero(static_cast<std::size_t>(fam.n), 0);
  for (std::size_t r = 0; r < reduced.size(); ++r) {
    const auto& [beta, j] = reduced[r];
    out[static_cast<std::size_t>(layout.index(beta, j))] += x[r];
    out[static_cast<std::size_t>(layout.index(zero, j))] -= x[r] * monomial_at(t.data(), beta);
  }
  return out;
}

std::string IFunctionalReport::to_json() const {
  nlohmann::ordered_json j;
  j["estimate"] = estimate;
  j["std_error"] = std_error;
  j["target"] = target;
  j["truncation_bound"] = truncation_bound;
  j["skipped_fraction"] = skipped_fraction;
  j["samples"] = samples;
  j["seed"] = seed;
  return j.dump();
}

IFunctionalReport i_functional_mc(const FlowSpec& spec, const GridSet& F) {
  const IndexFamily& fam = spec.fam;
  fam.validate();
  const auto layers = fam.layers();
  for (const auto& layer : layers)
    if (layer.size() != layers.front().size()) throw admissibility_error("dimensionality");
  const int L = static_cast<int>(layers.front().size());
  if (L < 2) throw std::invalid_argument("need at least two elements per layer");
  const int n = fam.n, np = fam.nprime;
  if (F.dim() != n + np) throw std::invalid_argument("F must live in R^{n+nprime}");
  if (static_cast<int>(spec.t.size()) != n) throw std::invalid_argument("base t rank");
  const auto reduced = reduced_order(fam);  // also enforces nondegeneracy
  const CoefficientLayout layout(fam);
  if (static_cast<int>(spec.u.size()) != layout.size())
    throw std::invalid_argument("base coefficient vector size mismatch");
  if (spec.strata < 1 || spec.samples < 1) throw std::invalid_argument("bad sampling parameters");

  const int J = L - 1;  // shifted copies; the base point supplies row zero of V
  const int sdim = n * J;

  // s cover: every shifted time t + s_j must be able to reach F's t-extent.
  Box s_cover;
  s_cover.lo.resize(static_cast<std::size_t>(sdim));
  s_cover.hi.resize(static_cast<std::size_t>(sdim));
  for (int j = 0; j < J; ++j)
    for (int i = 0; i < n; ++i) {
      s_cover.lo[static_cast<std::size_t>(j * n + i)] =
          F.box().lo[static_cast<std::size_t>(i)] - spec.t[static_cast<std::size_t>(i)];
      s_cover.hi[static_cast<std::size_t>(j * n + i)] =
          F.box().hi[static_cast<std::size_t>(i)] - spec.t[static_cast<std::size_t>(i)];
    }
  Box s_box = s_cover;
  if (spec.s_box) {
    const Box& user = *spec.s_box;
    if (user.lo.size() != s_cover.lo.size()) throw coverage_error("s box has the wrong dimension");
    for (std::size_t i = 0; i < user.lo.size(); ++i)
      if (user.lo[i] > s_cover.lo[i] || user.hi[i] < s_cover.hi[i])
        throw coverage_error("s box does not cover the support of the integrand");
    s_box = user;
  }
  double s_vol = 1.0;
  for (std::size_t i = 0; i < s_box.lo.size(); ++i) s_vol *= s_box.hi[i] - s_box.lo[i];

  // y-extent of F per curve component; the w draw lives here, one row per
  // shifted copy of each component.
  std::vector<double> y_lo(static_cast<std::size_t>(np)), y_hi(static_cast<std::size_t>(np));
  double y_vol = 1.0;
  for (int k = 0; k < np; ++k) {
    y_lo[static_cast<std::size_t>(k)] = F.box().lo[static_cast<std::size_t>(n + k)];
    y_hi[static_cast<std::size_t>(k)] = F.box().hi[static_cast<std::size_t>(n + k)];
    for (int j = 0; j < J; ++j)
      y_vol *= y_hi[static_cast<std::size_t>(k)] - y_lo[static_cast<std::size_t>(k)];
  }

  // Precomputed layout: reduced multiindices per layer (dictionary order,
  // matching right_flow), their coefficient slots, the constant slots, and
  // the base-point monomials.
  std::vector<std::vector<MultiIndex>> red(static_cast<std::size_t>(np));
  for (const auto& [alpha, j] : reduced) red[static_cast<std::size_t>(j - 1)].push_back(alpha);
  std::vector<std::vector<int>> red_idx(static_cast<std::size_t>(np));
  std::vector<int> zero_idx(static_cast<std::size_t>(np));
  std::vector<std::vector<double>> t_mono(static_cast<std::size_t>(np));
  const MultiIndex zero_mi(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < np; ++k) {
    if (static_cast<int>(red[static_cast<std::size_t>(k)].size()) != J)
      throw admissibility_error("dimensionality");
    zero_idx[static_cast<std::size_t>(k)] = layout.index(zero_mi, k + 1);
    for (const auto& alpha : red[static_cast<std::size_t>(k)]) {
      red_idx[static_cast<std::size_t>(k)].push_back(layout.index(alpha, k + 1));
      t_mono[static_cast<std::size_t>(k)].push_back(monomial_at(spec.t.data(), alpha));
    }
  }

  const std::int64_t N = ((spec.samples + spec.strata - 1) / spec.strata) * spec.strata;
  const CounterRng rng(spec.seed);
  constexpr std::uint64_t kSlots = 64;  // counters reserved per sample
  if (static_cast<std::uint64_t>(sdim + np * J) > kSlots)
    throw std::invalid_argument("family too large for the counter layout");
  const double stratum_w = (s_box.hi[0] - s_box.lo[0]) / spec.strata;

  const std::int64_t chunk = 4096;
  const std::int64_t nchunks = (N + chunk - 1) / chunk;
  std::vector<std::int64_t> skip_chunk(static_cast<std::size_t>(nchunks), 0);
  std::vector<unsigned char> viol_chunk(static_cast<std::size_t>(nchunks), 0);

  double mean_sum = 0.0, sq_sum = 0.0;
  par::sum2(
      N,
      [&](std::int64_t i, double& za, double& zb) {
        za = zb = 0.0;
        thread_local std::vector<double> s, ts, mono, mats, rhs, xk, u_sheared, point, vmat;
        thread_local std::vector<int> perm, vperm;
        s.resize(static_cast<std::size_t>(sdim));
        ts.resize(static_cast<std::size_t>(J) * n);
        mono.resize(static_cast<std::size_t>(J) * np * J);  // [j][k][c]
        mats.resize(static_cast<std::size_t>(np) * J * J);
        perm.resize(static_cast<std::size_t>(np) * J);
        rhs.resize(static_cast<std::size_t>(J));
        xk.resize(static_cast<std::size_t>(J));
        point.resize(static_cast<std::size_t>(n + np));
        vmat.resize(static_cast<std::size_t>(L) * L);
        vperm.resize(static_cast<std::size_t>(L));

        std::uint64_t ctr = static_cast<std::uint64_t>(i) * kSlots;

        // s, stratified on its first coordinate.
        {
          const auto stratum = static_cast<double>(static_cast<std::uint64_t>(i) %
                                                   static_cast<std::uint64_t>(spec.strata));
          const double lo = s_box.lo[0] + stratum_w * stratum;
          s[0] = rng.uniform(ctr++, lo, lo + stratum_w);
        }
        for (int c = 1; c < sdim; ++c)
          s[static_cast<std::size_t>(c)] = rng.uniform(
              ctr++, s_box.lo[static_cast<std::size_t>(c)], s_box.hi[static_cast<std::size_t>(c)]);

        for (int j = 0; j < J; ++j)
          for (int i2 = 0; i2 < n; ++i2)
            ts[static_cast<std::size_t>(j * n + i2)] =
                spec.t[static_cast<std::size_t>(i2)] + s[static_cast<std::size_t>(j * n + i2)];

        // Difference matrices A_k and their determinants.
        double det_prod = 1.0;
        for (int k = 0; k < np; ++k) {
          double* m = mats.data() + static_cast<std::size_t>(k) * J * J;
          for (int j = 0; j < J; ++j)
            for (int c = 0; c < J; ++c) {
              const double mjc =
                  monomial_at(ts.data() + static_cast<std::size_t>(j) * n,
                              red[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)]);
              mono[(static_cast<std::size_t>(j) * np + k) * J + c] = mjc;
              m[j * J + c] = mjc - t_mono[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
            }
          if (det_prod != 0.0)
            det_prod *= lu_factor(m, perm.data() + static_cast<std::size_t>(k) * J, J);
        }
        if (std::fabs(det_prod) < spec.v_min) {
          skip_chunk[static_cast<std::size_t>(i / chunk)]++;
          return;
        }

        // Draw the target y values and solve each layer for its shear block;
        // the solution is exactly the right-flow coordinate vector.
        u_sheared.assign(spec.u.begin(), spec.u.end());
        bool viol = false;
        std::size_t x_flat = 0;
        for (int k = 0; k < np; ++k) {
          const double u0 = spec.u[static_cast<std::size_t>(zero_idx[static_cast<std::size_t>(k)])];
          for (int j = 0; j < J; ++j) {
            const double w = rng.uniform(ctr++, y_lo[static_cast<std::size_t>(k)],
                                         y_hi[static_cast<std::size_t>(k)]);
            double b = u0;
            for (int c = 0; c < J; ++c)
              b += spec.u[static_cast<std::size_t>(
                       red_idx[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)])] *
                   mono[(static_cast<std::size_t>(j) * np + k) * J + c];
            rhs[static_cast<std::size_t>(j)] = w - b;
          }
          lu_solve(mats.data() + static_cast<std::size_t>(k) * J * J,
                   perm.data() + static_cast<std::size_t>(k) * J, J, rhs.data(), xk.data());
          for (int c = 0; c < J; ++c, ++x_flat) {
            const double xv = xk[static_cast<std::size_t>(c)];
            if (spec.x_box && (xv < spec.x_box->lo[x_flat] || xv > spec.x_box->hi[x_flat]))
              viol = true;
            // Right flow applied in place: the slot gains x and the constant
            // slot of its layer compensates at the base point.
            u_sheared[static_cast<std::size_t>(
                red_idx[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)])] += xv;
            u_sheared[static_cast<std::size_t>(zero_idx[static_cast<std::size_t>(k)])] -=
                xv * t_mono[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
          }
        }
        if (viol) {
          viol_chunk[static_cast<std::size_t>(i / chunk)] = 1;
          return;
        }

        // Grade the sheared graph points against F.
        double occ = 1.0;
        for (int j = 0; j < J && occ > 0.0; ++j) {
          for (int i2 = 0; i2 < n; ++i2)
            point[static_cast<std::size_t>(i2)] = ts[static_cast<std::size_t>(j * n + i2)];
          for (int k = 0; k < np; ++k) {
            double y = u_sheared[static_cast<std::size_t>(zero_idx[static_cast<std::size_t>(k)])];
            for (int c = 0; c < J; ++c)
              y += u_sheared[static_cast<std::size_t>(
                       red_idx[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)])] *
                   mono[(static_cast<std::size_t>(j) * np + k) * J + c];
            point[static_cast<std::size_t>(n + k)] = y;
          }
          occ *= F.occupancy_at(point);
        }
        if (occ <= 0.0) return;

        // Independent determinant route: the full layer Vandermonde at the
        // tuple (t, t+s_1, ...). The identity says the ratio to the
        // difference-matrix product is 1; it is carried, not assumed.
        double v_prod = 1.0;
        for (int k = 0; k < np; ++k) {
          for (int r = 0; r < L; ++r) {
            vmat[static_cast<std::size_t>(r) * L] = 1.0;  // constant column
            for (int c = 0; c < J; ++c)
              vmat[static_cast<std::size_t>(r) * L + c + 1] =
                  r == 0 ? t_mono[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)]
                         : mono[(static_cast<std::size_t>(r - 1) * np + k) * J + c];
          }
          v_prod *= lu_factor(vmat.data(), vperm.data(), L);
        }

        const double z = s_vol * y_vol * (std::fabs(v_prod) / std::fabs(det_prod)) * occ;
        za = z;
        zb = z * z;
      },
      mean_sum, sq_sum, chunk);

  std::int64_t skipped = 0;
  for (std::int64_t c : skip_chunk) skipped += c;
  for (unsigned char v : viol_chunk)
    if (v) throw coverage_error("x box fails to cover a visited shear coordinate");

  IFunctionalReport rep;
  rep.samples = N;
  rep.seed = spec.seed;
  const double mean = mean_sum / static_cast<double>(N);
  const double var = std::max(0.0, sq_sum / static_cast<double>(N) - mean * mean);
  rep.estimate = mean;
  rep.std_error = std::sqrt(var / static_cast<double>(N));
  rep.target = 1.0;
  const double mf = F.measure();
  for (int j = 0; j < J; ++j) rep.target *= mf;
  rep.skipped_fraction = static_cast<double>(skipped) / static_cast<double>(N);

  // Deterministic estimate of the mass the v_min cutoff can exclude: scan a
  // midpoint s-grid for determinant products within twice the cutoff and
  // charge each hit the full y volume (the integrand never exceeds it).
  {
    const std::int64_t budget = 200'000;
    int g = std::max(2, static_cast<int>(std::floor(std::pow(
                            static_cast<double>(budget), 1.0 / static_cast<double>(sdim)))));
    g = std::min(g, 64);
    std::int64_t total = 1;
    for (int c = 0; c < sdim; ++c) total *= g;
    const std::uint64_t hits = par::sum_u64(total, [&](std::int64_t it) -> std::uint64_t {
      thread_local std::vector<double> s2, ts2, m2;
      thread_local std::vector<int> perm2;
      s2.resize(static_cast<std::size_t>(sdim));
      ts2.resize(static_cast<std::size_t>(J) * n);
      m2.resize(static_cast<std::size_t>(J) * J);
      perm2.resize(static_cast<std::size_t>(J));
      std::int64_t rem = it;
      for (int c = 0; c < sdim; ++c) {
        const std::int64_t ic = rem % g;
        rem /= g;
        const double w =
            (s_box.hi[static_cast<std::size_t>(c)] - s_box.lo[static_cast<std::size_t>(c)]) / g;
        s2[static_cast<std::size_t>(c)] =
            s_box.lo[static_cast<std::size_t>(c)] + (static_cast<double>(ic) + 0.5) * w;
      }
      for (int j = 0; j < J; ++j)
        for (int i2 = 0; i2 < n; ++i2)
          ts2[static_cast<std::size_t>(j * n + i2)] =
              spec.t[static_cast<std::size_t>(i2)] + s2[static_cast<std::size_t>(j * n + i2)];
      double det_prod = 1.0;
      for (int k = 0; k < np && det_prod != 0.0; ++k) {
        for (int j = 0; j < J; ++j)
          for (int c = 0; c < J; ++c)
            m2[static_cast<std::size_t>(j * J + c)] =
                monomial_at(ts2.data() + static_cast<std::size_t>(j) * n,
                            red[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)]) -
                t_mono[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
        det_prod *= lu_factor(m2.data(), perm2.data(), J);
      }
      return std::fabs(det_prod) < 2.0 * spec.v_min ? 1u : 0u;
    });
    const double frac = static_cast<double>(hits) / static_cast<double>(total);
    rep.truncation_bound = 2.0 * frac * s_vol * y_vol;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Extremal sweeps
// ---------------------------------------------------------------------------

namespace {

std::int64_t card_m(int n, int d) { return binomial(n + d, d); }

// Delta exponent of |G| for the graded family; equals the slotwise sum of
// max(l - |alpha|, 0), which the sweep recomputes directly as a cross-check.
std::int64_t graded_exponent(int n, int nprime, int l) {
  return static_cast<std::int64_t>(nprime) * binomial(n + l, n + 1);
}

void validate_family(const ExtremalFamily& fam) {
  if (fam.n < 1 || fam.nprime < 1 || fam.d < 1)
    throw std::invalid_argument("extremal family: need n, nprime, d >= 1");
  if (fam.kind == ExtremalFamily::Kind::graded && (fam.l < 1 || fam.l > fam.d))
    throw std::invalid_argument("extremal family: level l must be in 1..d");
  if (fam.deltas.size() < 5)
    throw std::invalid_argument("fit error: need at least 5 delta points");
  for (std::size_t i = 0; i < fam.deltas.size(); ++i) {
    if (!(fam.deltas[i] > 0.0 && fam.deltas[i] < 1.0))
      throw std::invalid_argument("deltas must lie in (0,1)");
    if (i > 0 && !(fam.deltas[i] < fam.deltas[i - 1]))
      throw std::invalid_argument("deltas must decrease strictly");
  }
}

double resolve_c(const ExtremalFamily& fam) {
  if (fam.C > 0.0) return fam.C;
  return static_cast<double>(card_m(fam.n, fam.d) + 1);
}

// Fraction of a midpoint t-grid whose graph point stays inside the tube.
// With the tube constant above the coefficient sum this is exactly 1 for
// every coefficient vector in G, which is what makes the pairing exact.
double tube_fraction(const IndexFamily& full, const ParamPoint& u, double t_half, double tube,
                     int grid) {
  const int n = full.n;
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) total *= grid;
  std::int64_t inside = 0;
  std::vector<double> t(static_cast<std::size_t>(n));
  for (std::int64_t it = 0; it < total; ++it) {
    std::int64_t rem = it;
    for (int i = 0; i < n; ++i) {
      const std::int64_t ic = rem % grid;
      rem /= grid;
      t[static_cast<std::size_t>(i)] =
          -t_half + (static_cast<double>(ic) + 0.5) * (2.0 * t_half / grid);
    }
    const auto pt = graph_point(full, u, t);
    bool ok = true;
    for (int k = 0; k < full.nprime && ok; ++k)
      ok = std::fabs(pt[static_cast<std::size_t>(n + k)]) <= tube;
    if (ok) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(total);
}

}  // namespace

SweepReport extremal_sweep(const ExtremalFamily& family, const ExponentPair& pq,
                           int discard_largest) {
  validate_family(family);
  if (discard_largest < 0 ||
      family.deltas.size() - static_cast<std::size_t>(discard_largest) < 2)
    throw std::invalid_argument("fit error: not enough delta points after discarding");

  SweepReport rep;
  rep.family = family;
  rep.family.C = resolve_c(family);
  const int n = family.n, np = family.nprime, d = family.d;
  const double C = rep.family.C;
  const bool graded = family.kind == ExtremalFamily::Kind::graded;
  const int l = family.l;
  const auto monos = enumerate_multiindices(n, d);
  const std::int64_t cardM = card_m(n, d);

  std::int64_t k_sum = 0;
  if (graded) {
    for (const auto& alpha : monos) k_sum += std::max<std::int64_t>(l - degree(alpha), 0);
    k_sum *= np;
    rep.K = graded_exponent(n, np, l);
    if (rep.K != k_sum) throw std::logic_error("graded exponent identity violated");
  } else {
    rep.K = static_cast<std::int64_t>(np) * cardM;
    k_sum = rep.K;
  }

  const IndexFamily full = full_family(n, np, d);
  const CoefficientLayout layout(full);
  const CounterRng rng(family.seed);

  const double inv_p = (Rational(1) / pq.p).to_double();
  const double inv_qprime = 1.0 - (Rational(1) / pq.q).to_double();

  rep.max_mc_rel_err = 0.0;
  for (std::size_t di = 0; di < family.deltas.size(); ++di) {
    const double delta = family.deltas[di];
    SweepRow row;
    row.delta = delta;
    if (graded) {
      row.f_measure = ipow(2.0 * delta, n) * std::pow(2.0 * C * std::pow(delta, l), np);
      row.g_measure = std::pow(2.0, static_cast<double>(np * cardM)) *
                      std::pow(delta, static_cast<double>(k_sum));
      row.pairing = ipow(2.0 * delta, n) * row.g_measure;
    } else {
      row.f_measure = ipow(2.0, n) * std::pow(2.0 * C * delta, np);
      row.g_measure = std::pow(2.0 * delta, static_cast<double>(np * cardM));
      row.pairing = ipow(2.0, n) * row.g_measure;
    }
    row.ratio =
        row.pairing / (std::pow(row.f_measure, inv_p) * std::pow(row.g_measure, inv_qprime));

    // Cross-check: at coefficients sampled from G the whole t box maps into
    // the tube, so the inner integral is the full t volume.
    const double t_half = graded ? delta : 1.0;
    const double tube = graded ? C * std::pow(delta, l) : C * delta;
    double frac_min = 1.0;
    for (int dr = 0; dr < 4; ++dr) {
      ParamPoint u(static_cast<std::size_t>(layout.size()));
      for (int sidx = 0; sidx < layout.size(); ++sidx) {
        const auto& alpha = layout.order()[static_cast<std::size_t>(sidx)].first;
        const double half =
            graded ? std::pow(delta,
                              static_cast<double>(std::max<std::int64_t>(l - degree(alpha), 0)))
                   : delta;
        u[static_cast<std::size_t>(sidx)] =
            rng.uniform(static_cast<std::uint64_t>(di) * 4096 +
                            static_cast<std::uint64_t>(dr) * 512 + static_cast<std::uint64_t>(sidx),
                        -half, half);
      }
      frac_min = std::min(frac_min, tube_fraction(full, u, t_half, tube, 9));
    }
    row.pairing_mc = frac_min * ipow(2.0 * t_half, n) * row.g_measure;
    rep.max_mc_rel_err =
        std::max(rep.max_mc_rel_err,
                 std::fabs(row.pairing_mc - row.pairing) / std::max(row.pairing, 1e-300));
    rep.rows.push_back(row);
  }

  {
    std::vector<double> lx, lp, lf, lg, lr;
    for (std::size_t i = static_cast<std::size_t>(discard_largest); i < rep.rows.size(); ++i) {
      lx.push_back(std::log(rep.rows[i].delta));
      lp.push_back(std::log(rep.rows[i].pairing));
      lf.push_back(std::log(rep.rows[i].f_measure));
      lg.push_back(std::log(rep.rows[i].g_measure));
      lr.push_back(std::log(rep.rows[i].ratio));
    }
    rep.pairing_slope = lsq_slope(lx, lp);
    rep.f_slope = lsq_slope(lx, lf);
    rep.g_slope = lsq_slope(lx, lg);
    rep.ratio_slope = lsq_slope(lx, lr);
  }

  const Rational inv_p_r = Rational(1) / pq.p;
  const Rational inv_q_r = Rational(1) / pq.q;
  if (graded) {
    rep.pairing_slope_exact = Rational(n + rep.K);
    rep.f_slope_exact = Rational(n + static_cast<std::int64_t>(np) * l);
    rep.g_slope_exact = Rational(rep.K);
  } else {
    rep.pairing_slope_exact = Rational(rep.K);
    rep.f_slope_exact = Rational(np);
    rep.g_slope_exact = Rational(rep.K);
  }
  rep.ratio_slope_exact = rep.pairing_slope_exact - rep.f_slope_exact * inv_p_r -
                          rep.g_slope_exact * (Rational(1) - inv_q_r);

  for (int lev = 1; lev <= d; ++lev) {
    ConstraintCheck c;
    c.l = lev;
    c.lhs =
        Rational(n) + Rational(static_cast<std::int64_t>(np) * binomial(n + lev, n + 1)) * inv_q_r;
    c.rhs = Rational(n + static_cast<std::int64_t>(np) * lev) * inv_p_r;
    c.holds = c.lhs >= c.rhs;
    c.equality = c.lhs == c.rhs;
    rep.constraints.push_back(c);
  }
  {
    ConstraintCheck c;
    c.l = 0;
    c.lhs = Rational(static_cast<std::int64_t>(np) * cardM) * inv_q_r;
    c.rhs = Rational(np) * inv_p_r;
    c.holds = c.lhs >= c.rhs;
    c.equality = c.lhs == c.rhs;
    rep.constraints.push_back(c);
  }
  return rep;
}

std::string SweepReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "delta,pairing,F_measure,G_measure,ratio\n";
  for (const auto& r : rows)
    os << r.delta << ',' << r.pairing << ',' << r.f_measure << ',' << r.g_measure << ','
       << r.ratio << '\n';
  return os.str();
}

std::string SweepReport::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = family.kind == ExtremalFamily::Kind::graded ? "graded" : "primed";
  j["n"] = family.n;
  j["nprime"] = family.nprime;
  j["d"] = family.d;
  if (family.kind == ExtremalFamily::Kind::graded) j["l"] = family.l;
  j["C"] = family.C;
  j["seed"] = family.seed;
  j["K"] = K;
  j["slopes"] = {
      {"pairing", pairing_slope}, {"F", f_slope}, {"G", g_slope}, {"ratio", ratio_slope}};
  j["slopes_exact"] = {{"pairing", pairing_slope_exact.str()},
                       {"F", f_slope_exact.str()},
                       {"G", g_slope_exact.str()},
                       {"ratio", ratio_slope_exact.str()}};
  j["max_mc_rel_err"] = max_mc_rel_err;
  auto rows_j = nlohmann::ordered_json::array();
  for (const auto& r : rows)
    rows_j.push_back({{"delta", r.delta},
                      {"pairing", r.pairing},
                      {"F_measure", r.f_measure},
                      {"G_measure", r.g_measure},
                      {"ratio", r.ratio},
                      {"pairing_mc", r.pairing_mc}});
  j["rows"] = std::move(rows_j);
  auto cons = nlohmann::ordered_json::array();
  for (const auto& c : constraints)
    cons.push_back({{"l", c.l},
                    {"lhs", c.lhs.str()},
                    {"rhs", c.rhs.str()},
                    {"holds", c.holds},
                    {"equality", c.equality}});
  j["constraints"] = std::move(cons);
  return j.dump(2);
}

std::string SweepReport::to_svg() const {
  // Log-log polylines of the table columns against delta.
  const double W = 640, H = 420, ml = 60, mr = 150, mt = 20, mb = 45;
  const std::vector<std::pair<std::string, std::string>> series = {{"pairing", "#1f77b4"},
                                                                   {"F_measure", "#d62728"},
                                                                   {"G_measure", "#2ca02c"},
                                                                   {"ratio", "#9467bd"}};
  auto col = [](const SweepRow& r, std::size_t k) {
    switch (k) {
      case 0: return r.pairing;
      case 1: return r.f_measure;
      case 2: return r.g_measure;
      default: return r.ratio;
    }
  };
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& r : rows) {
    const double lx = std::log10(r.delta);
    xmin = std::min(xmin, lx);
    xmax = std::max(xmax, lx);
    for (std::size_t k = 0; k < 4; ++k) {
      const double ly = std::log10(std::max(col(r, k), 1e-300));
      ymin = std::min(ymin, ly);
      ymax = std::max(ymax, ly);
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  auto sx = [&](double lx) { return ml + (lx - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto sy = [&](double ly) { return H - mb - (ly - ymin) / (ymax - ymin) * (H - mt - mb); };
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
     << "' viewBox='0 0 " << W << ' ' << H << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
     << "' stroke='black'/>\n";
  os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
     << "' stroke='black'/>\n";
  os << "<text x='" << (ml + (W - ml - mr) / 2) << "' y='" << H - 10
     << "' text-anchor='middle' font-size='13'>log10 delta</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    os << "<polyline fill='none' stroke='" << series[k].second << "' stroke-width='1.5' points='";
    for (const auto& r : rows)
      os << sx(std::log10(r.delta)) << ',' << sy(std::log10(std::max(col(r, k), 1e-300))) << ' ';
    os << "'/>\n";
    os << "<text x='" << W - mr + 10 << "' y='" << mt + 18.0 * (k + 1) << "' fill='"
       << series[k].second << "' font-size='13'>" << series[k].first << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

namespace {

Rational family_slope(const ExtremalFamily& fam, const Rational& inv_p, const Rational& inv_q) {
  const int n = fam.n, np = fam.nprime;
  if (fam.kind == ExtremalFamily::Kind::graded) {
    const std::int64_t K = graded_exponent(n, np, fam.l);
    return Rational(n) + Rational(K) * inv_q -
           Rational(n + static_cast<std::int64_t>(np) * fam.l) * inv_p;
  }
  const std::int64_t Kp = static_cast<std::int64_t>(np) * card_m(n, fam.d);
  return Rational(Kp) * inv_q - Rational(np) * inv_p;
}

BoundednessClass classify_slope(const Rational& slope) {
  const Rational band(1, 50);
  if (slope > band) return BoundednessClass::bounded_looking;
  if (slope < -band) return BoundednessClass::diverging;
  return BoundednessClass::critical;
}

}  // namespace

BoundednessVerdict boundedness_ratio_sweep(const ExtremalFamily& family, const Rational& inv_p,
                                           const Rational& inv_q) {
  validate_family(family);
  BoundednessVerdict v;
  v.slope_exact = family_slope(family, inv_p, inv_q);

  // Numeric route: closed-form ratio rows, slope by least squares, largest
  // delta discarded.
  const double ip = inv_p.to_double(), iqp = 1.0 - inv_q.to_double();
  const int n = family.n, np = family.nprime;
  const double C = resolve_c(family);
  const std::int64_t cardM = card_m(n, family.d);
  std::vector<double> lx, lr;
  for (std::size_t i = 1; i < family.deltas.size(); ++i) {
    const double delta = family.deltas[i];
    double pairing, fm, gm;
    if (family.kind == ExtremalFamily::Kind::graded) {
      const std::int64_t ks = graded_exponent(n, np, family.l);
      fm = ipow(2.0 * delta, n) * std::pow(2.0 * C * std::pow(delta, family.l), np);
      gm = std::pow(2.0, static_cast<double>(np * cardM)) *
           std::pow(delta, static_cast<double>(ks));
      pairing = ipow(2.0 * delta, n) * gm;
    } else {
      fm = ipow(2.0, n) * std::pow(2.0 * C * delta, np);
      gm = std::pow(2.0 * delta, static_cast<double>(np * cardM));
      pairing = ipow(2.0, n) * gm;
    }
    lx.push_back(std::log(delta));
    lr.push_back(std::log(pairing / (std::pow(fm, ip) * std::pow(gm, iqp))));
  }
  v.slope_fit = lsq_slope(lx, lr);
  v.classification = classify_slope(v.slope_exact);
  return v;
}

BoundednessVerdict classify_point(int n, int nprime, int d, const Rational& inv_p,
                                  const Rational& inv_q) {
  if (n < 1 || nprime < 1 || d < 1) throw std::invalid_argument("bad family parameters");
  BoundednessVerdict v;
  bool first = true;
  for (int lev = 1; lev <= d + 1; ++lev) {
    ExtremalFamily fam;
    fam.n = n;
    fam.nprime = nprime;
    fam.d = d;
    if (lev <= d) {
      fam.kind = ExtremalFamily::Kind::graded;
      fam.l = lev;
    } else {
      fam.kind = ExtremalFamily::Kind::primed;
    }
    const Rational s = family_slope(fam, inv_p, inv_q);
    if (first || s < v.slope_exact) {
      v.slope_exact = s;
      first = false;
    }
  }
  v.slope_fit = v.slope_exact.to_double();
  v.classification = classify_slope(v.slope_exact);
  return v;
}

std::string BoundednessVerdict::to_json() const {
  nlohmann::ordered_json j;
  j["slope"] = slope_exact.str();
  j["slope_fit"] = slope_fit;
  j["classification"] = classification == BoundednessClass::bounded_looking ? "bounded-looking"
                        : classification == BoundednessClass::diverging     ? "diverging"
                                                                            : "critical";
  return j.dump();
}

// ---------------------------------------------------------------------------
// Log growth
// ---------------------------------------------------------------------------

LogGrowthReport log_growth_fit(const LogGrowthSpec& spec) {
  const int n = static_cast<int>(spec.beta.size());
  if (n < 1) throw std::invalid_argument("need at least one exponent vector");
  for (const auto& b : spec.beta)
    if (static_cast<int>(b.size()) != n)
      throw std::invalid_argument("exponent vectors must have length n");
  if (spec.m < 0 || spec.m > n) throw std::invalid_argument("m out of range");
  if (spec.R.size() < 5) throw std::invalid_argument("fit error: need at least 5 R points");
  for (std::size_t i = 0; i < spec.R.size(); ++i) {
    if (!(spec.R[i] > 1.0)) throw std::invalid_argument("R grid must exceed 1");
    if (i > 0 && !(spec.R[i] > spec.R[i - 1]))
      throw std::invalid_argument("R grid must increase strictly");
  }

  // Exact Gauss-Jordan on [B^T | 1]; dependent exponent vectors surface as an
  // empty pivot column. The determinant accumulates the pivots.
  std::vector<std::vector<Rational>> a(static_cast<std::size_t>(n),
                                       std::vector<Rational>(static_cast<std::size_t>(n + 1)));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c)
      a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          Rational(spec.beta[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)]);
    a[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)] = Rational(1);
  }
  Rational det(1);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)].sign() != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::domain_error("degenerate exponent vectors: dependent rows");
    if (piv != col) {
      std::swap(a[static_cast<std::size_t>(piv)], a[static_cast<std::size_t>(col)]);
      det = -det;
    }
    det = det * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Rational f = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                         a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
      if (f.sign() == 0) continue;
      for (int c = col; c <= n; ++c)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
    }
  }

  LogGrowthReport rep;
  rep.det_b = det;
  rep.gamma.resize(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r)
    rep.gamma[static_cast<std::size_t>(r)] =
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)] /
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];

  rep.scenario_ok = true;
  for (int j = spec.m; j < n; ++j)
    if (rep.gamma[static_cast<std::size_t>(j)].sign() != 0) rep.scenario_ok = false;

  // Shell factor after the monomial change of variables; the gamma = 0 slot
  // degenerates to log U.
  auto shell = [](double upper, const Rational& g) {
    if (g.sign() == 0) return std::log(upper);
    const double gd = g.to_double();
    return (std::pow(upper, gd) - 1.0) / gd;
  };

  rep.R = spec.R;
  const double front = ipow(2.0, n) / std::fabs(det.to_double());
  for (double R : spec.R) {
    double v = front;
    for (int j = 0; j < n; ++j)
      v *= shell(j < spec.m ? 2.0 : R, rep.gamma[static_cast<std::size_t>(j)]);
    rep.measure.push_back(v);
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < rep.R.size(); ++i) {
    lx.push_back(std::log(std::log(rep.R[i])));
    ly.push_back(std::log(std::max(rep.measure[i], 1e-300)));
  }
  rep.gamma_fit = lsq_slope(lx, ly);
  return rep;
}

std::string LogGrowthReport::to_json() const {
  nlohmann::ordered_json j;
  j["R"] = R;
  j["measure"] = measure;
  auto g = nlohmann::ordered_json::array();
  for (const auto& v : gamma) g.push_back(v.str());
  j["gamma"] = std::move(g);
  j["det_b"] = det_b.str();
  j["gamma_fit"] = gamma_fit;
  j["scenario_ok"] = scenario_ok;
  return j.dump();
}

}  // namespace polyxform
