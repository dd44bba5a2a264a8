#include "polyxform/vandermonde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "polyxform/admissibility.hpp"
#include "polyxform/errors.hpp"
#include "polyxform/multiindex.hpp"
#include "polyxform/parallel.hpp"

namespace polyxform {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

double monomial_at(const std::vector<double>& x, const MultiIndex& a) {
  double r = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) r *= ipow(x[i], a[i]);
  return r;
}

// In-place LU determinant with partial pivoting. m is row-major, size k*k.
double det_lu(std::vector<double>& m, int k) {
  double det = 1.0;
  for (int col = 0; col < k; ++col) {
    int piv = col;
    double best = std::fabs(m[col * k + col]);
    for (int r = col + 1; r < k; ++r) {
      double v = std::fabs(m[r * k + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != col) {
      for (int c = col; c < k; ++c) std::swap(m[piv * k + c], m[col * k + c]);
      det = -det;
    }
    det *= m[col * k + col];
    for (int r = col + 1; r < k; ++r) {
      double f = m[r * k + col] / m[col * k + col];
      for (int c = col + 1; c < k; ++c) m[r * k + c] -= f * m[col * k + c];
    }
  }
  return det;
}

std::vector<MultiIndex> dict_sorted(std::vector<MultiIndex> alpha) {
  std::sort(alpha.begin(), alpha.end(), DictLess{});
  return alpha;
}

void check_points(const std::vector<MultiIndex>& alpha, const PointTuple& pts) {
  if (alpha.empty()) throw std::invalid_argument("layer is empty");
  if (pts.size() != alpha.size())
    throw std::invalid_argument("need exactly one point per layer element, got " +
                                std::to_string(pts.size()) + " points for " +
                                std::to_string(alpha.size()) + " elements");
  for (const auto& p : pts)
    if (p.size() != alpha.front().size())
      throw std::invalid_argument("point dimension does not match multiindex length");
}

}  // namespace

double layer_vandermonde(const std::vector<MultiIndex>& alpha, const PointTuple& pts) {
  check_points(alpha, pts);
  const auto cols = dict_sorted(alpha);
  const int k = static_cast<int>(cols.size());
  std::vector<double> m(static_cast<std::size_t>(k) * k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) m[r * k + c] = monomial_at(pts[r], cols[c]);
  return det_lu(m, k);
}

VandermondeEvaluation evaluate_V(const IndexFamily& fam, const PointTuple& pts) {
  const auto layers = fam.layers();
  VandermondeEvaluation out;
  out.per_layer.reserve(layers.size());
  for (const auto& layer : layers)
    if (layer.size() != layers.front().size()) throw admissibility_error("dimensionality");
  out.product = 1.0;
  for (const auto& layer : layers) {
    double v = layer_vandermonde(layer, pts);
    out.per_layer.push_back(v);
    out.product *= v;
  }
  return out;
}

Rational layer_vandermonde_exact(const std::vector<MultiIndex>& alpha,
                                 const std::vector<std::vector<Rational>>& pts) {
  if (alpha.empty()) throw std::invalid_argument("layer is empty");
  if (pts.size() != alpha.size()) throw std::invalid_argument("point count mismatch");
  const auto cols = dict_sorted(alpha);
  const int k = static_cast<int>(cols.size());

  std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k));
  for (int r = 0; r < k; ++r) {
    if (pts[r].size() != cols.front().size())
      throw std::invalid_argument("point dimension does not match multiindex length");
    for (int c = 0; c < k; ++c) {
      Rational v(1);
      for (std::size_t i = 0; i < cols[c].size(); ++i)
        for (int e = 0; e < cols[c][i]; ++e) v = v * pts[r][i];
      m[r][c] = v;
    }
  }

  // Leibniz sum; factorial cost keeps this to small k, which is all the
  // cross-checks need.
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  Rational det(0);
  do {
    int inversions = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Rational term(inversions % 2 == 0 ? 1 : -1);
    for (int r = 0; r < k; ++r) term = term * m[r][perm[r]];
    det = det + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

double cofactor_top_coefficient(const std::vector<MultiIndex>& alpha, const PointTuple& xprime) {
  if (alpha.size() < 2) throw std::invalid_argument("need at least two layer elements");
  const auto cols = dict_sorted(alpha);
  std::vector<MultiIndex> rest(cols.begin(), cols.end() - 1);
  if (xprime.size() != rest.size())
    throw std::invalid_argument("need one point per remaining layer element");
  const int L = static_cast<int>(cols.size());
  double minor = layer_vandermonde(rest, xprime);
  return (L % 2 == 0 ? -1.0 : 1.0) * minor;  // (-1)^{1+L}
}

Rational coercivity_exponent(const IndexFamily& fam) {
  const auto report = analyze(fam);
  if (!report.admissible()) {
    const char* cond = !report.dimensionality_ok          ? "dimensionality"
                       : !report.scaling_ok               ? "scaling"
                       : !report.spanning_ok              ? "spanning"
                       : !report.strengthened_spanning_ok ? "strengthened spanning"
                                                          : "nondegeneracy";
    throw admissibility_error(cond);
  }
  return Rational(*report.cardinality, *report.cardinality + *report.homogeneity);
}

namespace {

struct CompressedSet {
  std::vector<std::vector<double>> centers;  // occupied cells only
  std::vector<double> weight;                // occupancy * cell volume
};

CompressedSet compress(const GridSet& g) {
  CompressedSet out;
  const double cv = g.cell_volume();
  for (std::int64_t i = 0; i < g.cell_count(); ++i) {
    double occ = g.occupancy(i);
    if (occ > 0.0) {
      out.centers.push_back(g.cell_center(i));
      out.weight.push_back(occ * cv);
    }
  }
  return out;
}

// Shared by the parallel kernel and the serial reference: sum over all cell
// tuples with the first slot pinned.
double lhs_for_first_cell(const std::vector<std::vector<MultiIndex>>& layers,
                          const std::vector<CompressedSet>& sets, std::size_t first) {
  const int m = static_cast<int>(sets.size());
  const int n = static_cast<int>(sets[0].centers[first].size());
  PointTuple pts(m, std::vector<double>(n));
  pts[0] = sets[0].centers[first];
  std::vector<double> scratch(static_cast<std::size_t>(m) * m);

  std::vector<std::size_t> idx(m, 0);
  double total = 0.0;
  int depth = 1;
  if (m == 1) {
    double prod = 1.0;
    for (const auto& layer : layers) {
      scratch[0] = monomial_at(pts[0], layer[0]);
      prod *= scratch[0];
    }
    return std::fabs(prod) * sets[0].weight[first];
  }
  while (true) {
    if (depth == m) {
      double w = sets[0].weight[first];
      for (int j = 1; j < m; ++j) w *= sets[j].weight[idx[j] - 1];
      double prod = 1.0;
      for (const auto& layer : layers) {
        const int k = m;
        for (int r = 0; r < k; ++r)
          for (int c = 0; c < k; ++c) scratch[r * k + c] = monomial_at(pts[r], layer[c]);
        prod *= det_lu(scratch, k);
      }
      total += std::fabs(prod) * w;
      --depth;
      continue;
    }
    if (idx[depth] == sets[depth].centers.size()) {
      idx[depth] = 0;
      --depth;
      if (depth == 0) break;
      continue;
    }
    pts[depth] = sets[depth].centers[idx[depth]];
    ++idx[depth];
    ++depth;
    // idx[depth-1] now points one past the cell loaded into pts[depth-1]; the
    // decrement branch above rewinds it when the deeper loops finish.
  }
  return total;
}

std::vector<std::vector<MultiIndex>> sorted_layers(const IndexFamily& fam) {
  auto layers = fam.layers();
  for (auto& layer : layers) std::sort(layer.begin(), layer.end(), DictLess{});
  return layers;
}

}  // namespace

namespace ref {

double coercivity_lhs(const IndexFamily& fam, const std::vector<GridSet>& sets) {
  const auto layers = sorted_layers(fam);
  std::vector<CompressedSet> comp;
  comp.reserve(sets.size());
  for (const auto& g : sets) comp.push_back(compress(g));
  double total = 0.0;
  for (std::size_t first = 0; first < comp[0].centers.size(); ++first)
    total += lhs_for_first_cell(layers, comp, first);
  return total;
}

}  // namespace ref

CoercivityReport coercivity_ratio(const IndexFamily& fam, const std::vector<GridSet>& sets) {
  CoercivityReport out;
  out.p = coercivity_exponent(fam);
  const auto report = analyze(fam);
  const std::int64_t m = *report.cardinality;
  if (static_cast<std::int64_t>(sets.size()) != m)
    throw std::invalid_argument("need one set per layer element, got " +
                                std::to_string(sets.size()) + " for cardinality " +
                                std::to_string(m));
  for (const auto& g : sets) {
    if (g.dim() != fam.n) throw std::invalid_argument("set dimension does not match family");
    if (g.measure() <= 0.0) throw std::invalid_argument("degenerate input: set has measure zero");
  }

  std::vector<CompressedSet> comp;
  comp.reserve(sets.size());
  std::int64_t tuples = 1;
  for (const auto& g : sets) {
    comp.push_back(compress(g));
    tuples *= static_cast<std::int64_t>(comp.back().centers.size());
    if (tuples > 10'000'000)
      throw std::invalid_argument("cell tuple count exceeds 10^7; lower the resolutions");
  }

  const auto layers = sorted_layers(fam);
  out.lhs = par::sum(
      static_cast<std::int64_t>(comp[0].centers.size()),
      [&](std::int64_t first) {
        return lhs_for_first_cell(layers, comp, static_cast<std::size_t>(first));
      },
      /*chunk=*/1);

  const double inv_p = (Rational(1) / out.p).to_double();
  out.rhs_base = 1.0;
  for (const auto& g : sets) out.rhs_base *= std::pow(g.measure(), inv_p);
  out.ratio = out.lhs / out.rhs_base;
  return out;
}

}  // namespace polyxform
