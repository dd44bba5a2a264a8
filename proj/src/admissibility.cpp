#include "polyxform/admissibility.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "polyxform/errors.hpp"

namespace polyxform {

int integer_rank(const std::vector<MultiIndex>& rows) {
  if (rows.empty()) return 0;
  const std::size_t ncols = rows[0].size();
  std::vector<std::vector<Rational>> m;
  m.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != ncols) throw std::invalid_argument("integer_rank: ragged rows");
    std::vector<Rational> row(ncols);
    for (std::size_t c = 0; c < ncols; ++c) row[c] = r[c];
    m.push_back(std::move(row));
  }
  int rank = 0;
  for (std::size_t col = 0; col < ncols && rank < static_cast<int>(m.size()); ++col) {
    std::size_t pivot = m.size();
    for (std::size_t r = static_cast<std::size_t>(rank); r < m.size(); ++r) {
      if (m[r][col].sign() != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot == m.size()) continue;
    std::swap(m[static_cast<std::size_t>(rank)], m[pivot]);
    const auto& prow = m[static_cast<std::size_t>(rank)];
    for (std::size_t r = static_cast<std::size_t>(rank) + 1; r < m.size(); ++r) {
      if (m[r][col].sign() == 0) continue;
      Rational f = m[r][col] / prow[col];
      for (std::size_t c = col; c < ncols; ++c) m[r][c] -= f * prow[c];
    }
    ++rank;
  }
  return rank;
}

AdmissibilityReport analyze(const IndexFamily& fam) {
  fam.validate();
  AdmissibilityReport rep;
  const auto layers = fam.layers();

  // (1) dimensionality: all layers share one cardinality, and none is empty.
  std::size_t card = layers.front().size();
  rep.dimensionality_ok = card > 0;
  for (const auto& layer : layers)
    if (layer.size() != card) rep.dimensionality_ok = false;
  if (rep.dimensionality_ok) rep.cardinality = static_cast<std::int64_t>(card);

  // (2) scaling: the sum of all multiindices is |A| * (1,...,1).
  MultiIndex total(static_cast<std::size_t>(fam.n), 0);
  for (const auto& [alpha, j] : fam.pairs)
    for (int i = 0; i < fam.n; ++i) total[static_cast<std::size_t>(i)] += alpha[static_cast<std::size_t>(i)];
  rep.scaling_ok = std::all_of(total.begin(), total.end(), [&](int v) { return v == total[0]; });
  if (rep.scaling_ok) rep.homogeneity = total[0];

  // (3) spanning: the union of all layers spans R^n.
  std::vector<MultiIndex> all;
  for (const auto& [alpha, j] : fam.pairs) all.push_back(alpha);
  rep.spanning_ok = integer_rank(all) == fam.n;

  // (3') strengthened spanning: beta_j = sum over layers of the j-th element
  // in dictionary order; the betas must span R^n. Needs equal layer sizes.
  if (rep.dimensionality_ok) {
    rep.beta.assign(card, MultiIndex(static_cast<std::size_t>(fam.n), 0));
    for (const auto& layer : layers)
      for (std::size_t j = 0; j < card; ++j)
        for (int i = 0; i < fam.n; ++i)
          rep.beta[j][static_cast<std::size_t>(i)] += layer[j][static_cast<std::size_t>(i)];
    rep.strengthened_spanning_ok = integer_rank(rep.beta) == fam.n;
  }

  // (4) nondegeneracy: 0 belongs to every layer.
  rep.nondegeneracy_ok = true;
  const MultiIndex zero(static_cast<std::size_t>(fam.n), 0);
  for (const auto& layer : layers)
    if (!std::binary_search(layer.begin(), layer.end(), zero, DictLess{}))
      rep.nondegeneracy_ok = false;

  return rep;
}

std::string AdmissibilityReport::to_json() const {
  nlohmann::ordered_json j;
  j["dimensionality_ok"] = dimensionality_ok;
  j["scaling_ok"] = scaling_ok;
  j["spanning_ok"] = spanning_ok;
  j["strengthened_spanning_ok"] = strengthened_spanning_ok;
  j["nondegeneracy_ok"] = nondegeneracy_ok;
  j["admissible"] = admissible();
  if (cardinality) j["cardinality"] = *cardinality;
  if (homogeneity) j["homogeneity"] = *homogeneity;
  j["beta"] = beta;
  return j.dump(2);
}

std::string AdmissibilityReport::summary() const {
  std::ostringstream os;
  os << "dimensionality=" << (dimensionality_ok ? "ok" : "FAIL")
     << " scaling=" << (scaling_ok ? "ok" : "FAIL")
     << " spanning=" << (spanning_ok ? "ok" : "FAIL")
     << " strengthened_spanning=" << (strengthened_spanning_ok ? "ok" : "FAIL")
     << " nondegeneracy=" << (nondegeneracy_ok ? "ok" : "FAIL");
  if (cardinality) os << " #A=" << *cardinality;
  if (homogeneity) os << " |A|=" << *homogeneity;
  return os.str();
}

ExponentPair exponents(const IndexFamily& fam, bool allow_degenerate) {
  const auto rep = analyze(fam);
  if (!rep.dimensionality_ok) throw admissibility_error("dimensionality");
  if (!rep.scaling_ok) throw admissibility_error("scaling");
  if (!rep.spanning_ok) throw admissibility_error("spanning");
  if (!rep.strengthened_spanning_ok) throw admissibility_error("strengthened spanning");
  if (!rep.nondegeneracy_ok && !allow_degenerate) throw admissibility_error("nondegeneracy");
  const Rational size = *rep.homogeneity;  // |A|
  const Rational card = *rep.cardinality;  // #A
  return ExponentPair{(size + card) / card, size + card};
}

ExponentPair full_exponents(int n, int nprime, int d) {
  if (n < 1 || nprime < 1 || d < 1) throw std::invalid_argument("full_exponents: need n,nprime,d >= 1");
  Rational p = Rational(1) + Rational(static_cast<std::int64_t>(nprime) * d, n + 1);
  Rational q = Rational(binomial(n + d, d)) * p;
  return ExponentPair{p, q};
}

namespace {

using Pt = std::array<Rational, 2>;

Rational cross(const Pt& o, const Pt& a, const Pt& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew monotone chain, exact comparisons, counterclockwise output starting
// at the lexicographically smallest point.
std::vector<Pt> convex_hull(std::vector<Pt> pts) {
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    return a[1] < b[1];
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<Pt> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]).sign() <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]).sign() <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

RieszPolygon riesz_polygon(int n, int nprime, int d) {
  if (n < 1 || nprime < 1 || d < 1) throw std::invalid_argument("riesz_polygon: need n,nprime,d >= 1");
  std::vector<Pt> gens = {{Rational(0), Rational(0)}, {Rational(1), Rational(1)}, {Rational(0), Rational(1)}};
  for (int j = 1; j <= d; ++j) {
    Rational x(n + 1, n + static_cast<std::int64_t>(nprime) * j + 1);
    Rational y = x / Rational(binomial(n + j, j));
    gens.push_back({x, y});
  }
  RieszPolygon poly;
  poly.vertices = convex_hull(std::move(gens));
  return poly;
}

bool polygon_contains(const RieszPolygon& poly, const Rational& inv_p, const Rational& inv_q) {
  const Rational zero(0), one(1);
  if (inv_p < zero || inv_p > one || inv_q < zero || inv_q > one)
    throw std::domain_error("polygon_contains: point outside the unit square");
  const auto& v = poly.vertices;
  const Pt pt{inv_p, inv_q};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Pt& a = v[i];
    const Pt& b = v[(i + 1) % v.size()];
    if (cross(a, b, pt).sign() < 0) return false;  // right of a ccw edge
  }
  return true;
}

std::string RieszPolygon::to_csv() const {
  std::ostringstream os;
  os << "inv_p,inv_q\n";
  for (const auto& v : vertices) os << v[0].str() << "," << v[1].str() << "\n";
  return os.str();
}

std::string RieszPolygon::to_svg() const {
  // Unit square with the region shaded and its nontrivial corners dotted.
  const double S = 360.0, mx = 70.0, my = 40.0;
  auto X = [&](const Rational& x) { return mx + x.to_double() * S; };
  auto Y = [&](const Rational& y) { return my + (1.0 - y.to_double()) * S; };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"460\" "
        "viewBox=\"0 0 500 460\">\n";
  os << "  <rect x=\"" << mx << "\" y=\"" << my << "\" width=\"" << S << "\" height=\"" << S
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "  <polygon points=\"";
  for (const auto& v : vertices) os << X(v[0]) << "," << Y(v[1]) << " ";
  os << "\" fill=\"lightgray\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  for (const auto& v : vertices) {
    const bool corner = (v[0].num() == 0 || v[0] == Rational(1)) && (v[1].num() == 0 || v[1] == Rational(1));
    if (corner) continue;
    os << "  <circle cx=\"" << X(v[0]) << "\" cy=\"" << Y(v[1])
       << "\" r=\"3.5\" fill=\"black\"/>\n";
    os << "  <text x=\"" << X(v[0]) + 8 << "\" y=\"" << Y(v[1]) + 4
       << "\" font-size=\"12\" font-family=\"serif\">(" << v[0].str() << ", " << v[1].str()
       << ")</text>\n";
  }
  os << "  <text x=\"" << mx + S / 2 << "\" y=\"" << my + S + 35
     << "\" font-size=\"15\" font-family=\"serif\" text-anchor=\"middle\">1/p</text>\n";
  os << "  <text x=\"" << mx - 40 << "\" y=\"" << my + S / 2
     << "\" font-size=\"15\" font-family=\"serif\">1/q</text>\n";
  os << "  <text x=\"" << mx - 12 << "\" y=\"" << my + S + 16
     << "\" font-size=\"12\" font-family=\"serif\">0</text>\n";
  os << "  <text x=\"" << mx + S - 4 << "\" y=\"" << my + S + 16
     << "\" font-size=\"12\" font-family=\"serif\">1</text>\n";
  os << "  <text x=\"" << mx - 14 << "\" y=\"" << my + 6
     << "\" font-size=\"12\" font-family=\"serif\">1</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace polyxform
