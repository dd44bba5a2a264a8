#include "polyxform/gridset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "polyxform/parallel.hpp"

namespace polyxform {

double Box::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)];
  return v;
}

void Box::validate() const {
  if (lo.size() != hi.size() || lo.empty()) throw std::invalid_argument("box: bad bounds");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw std::invalid_argument("box: lo must be < hi per axis");
}

GridSet::GridSet(Box box, std::vector<int> resolution, int quantum_bits)
    : box_(std::move(box)), res_(std::move(resolution)), quantum_bits_(quantum_bits) {
  box_.validate();
  if (static_cast<int>(res_.size()) != box_.dim())
    throw std::invalid_argument("gridset: resolution rank != box dim");
  for (int r : res_)
    if (r < 1) throw std::invalid_argument("gridset: resolution must be >= 1");
  if (quantum_bits_ < 1 || quantum_bits_ > 52)
    throw std::invalid_argument("gridset: quantum_bits out of range");
  init_geometry();
  occ_.assign(static_cast<std::size_t>(stride_[0]) * static_cast<std::size_t>(res_[0]), 0.0);
}

void GridSet::init_geometry() {
  const int n = box_.dim();
  width_.resize(static_cast<std::size_t>(n));
  stride_.assign(static_cast<std::size_t>(n), 1);
  for (int i = 0; i < n; ++i)
    width_[static_cast<std::size_t>(i)] =
        (box_.hi[static_cast<std::size_t>(i)] - box_.lo[static_cast<std::size_t>(i)]) /
        res_[static_cast<std::size_t>(i)];
  for (int i = n - 2; i >= 0; --i)
    stride_[static_cast<std::size_t>(i)] =
        stride_[static_cast<std::size_t>(i + 1)] * res_[static_cast<std::size_t>(i + 1)];
}

double GridSet::cell_volume() const {
  double v = 1.0;
  for (double w : width_) v *= w;
  return v;
}

void GridSet::set_occupancy(std::int64_t flat, double v) {
  if (v < 0.0 || v > 1.0) throw std::invalid_argument("occupancy outside [0,1]");
  const double scaled = std::ldexp(v, quantum_bits_);
  if (scaled != std::floor(scaled))
    throw std::invalid_argument("occupancy is not a multiple of the quantum");
  occ_[static_cast<std::size_t>(flat)] = v;
}

std::vector<std::int64_t> GridSet::unflatten(std::int64_t flat) const {
  std::vector<std::int64_t> idx(static_cast<std::size_t>(dim()));
  for (int i = 0; i < dim(); ++i) {
    idx[static_cast<std::size_t>(i)] = flat / stride_[static_cast<std::size_t>(i)];
    flat %= stride_[static_cast<std::size_t>(i)];
  }
  return idx;
}

std::int64_t GridSet::flatten(const std::vector<std::int64_t>& idx) const {
  std::int64_t flat = 0;
  for (int i = 0; i < dim(); ++i) flat += idx[static_cast<std::size_t>(i)] * stride_[static_cast<std::size_t>(i)];
  return flat;
}

std::vector<double> GridSet::cell_center(std::int64_t flat) const {
  const auto idx = unflatten(flat);
  std::vector<double> c(static_cast<std::size_t>(dim()));
  for (int i = 0; i < dim(); ++i)
    c[static_cast<std::size_t>(i)] = box_.lo[static_cast<std::size_t>(i)] +
                                     (static_cast<double>(idx[static_cast<std::size_t>(i)]) + 0.5) *
                                         width_[static_cast<std::size_t>(i)];
  return c;
}

double GridSet::occupancy_at(const std::vector<double>& pt) const {
  if (static_cast<int>(pt.size()) != dim()) throw std::invalid_argument("occupancy_at: wrong dim");
  std::int64_t flat = 0;
  for (int i = 0; i < dim(); ++i) {
    const double u = (pt[static_cast<std::size_t>(i)] - box_.lo[static_cast<std::size_t>(i)]) /
                     width_[static_cast<std::size_t>(i)];
    if (u < 0.0 || u >= static_cast<double>(res_[static_cast<std::size_t>(i)])) return 0.0;
    flat += static_cast<std::int64_t>(u) * stride_[static_cast<std::size_t>(i)];
  }
  return occ_[static_cast<std::size_t>(flat)];
}

std::uint64_t GridSet::mass_units() const {
  const int qb = quantum_bits_;
  const auto& occ = occ_;
  return par::sum_u64(cell_count(), [&occ, qb](std::int64_t i) {
    return static_cast<std::uint64_t>(std::llround(std::ldexp(occ[static_cast<std::size_t>(i)], qb)));
  });
}

double GridSet::measure() const {
  return std::ldexp(static_cast<double>(mass_units()), -quantum_bits_) * cell_volume();
}

double GridSet::boundary_cell_volume() const {
  const auto& occ = occ_;
  const double cv = cell_volume();
  return cv * par::sum(cell_count(), [&occ](std::int64_t i) {
           const double v = occ[static_cast<std::size_t>(i)];
           return (v > 0.0 && v < 1.0) ? 1.0 : 0.0;
         });
}

namespace {

double quantize(double v, int qb) {
  const double scaled = std::nearbyint(std::ldexp(v, qb));
  double q = std::ldexp(scaled, -qb);
  return std::clamp(q, 0.0, 1.0);
}

}  // namespace

GridSet GridSet::from_boxes(Box domain, std::vector<int> resolution, const std::vector<Box>& boxes,
                            int quantum_bits) {
  GridSet g(std::move(domain), std::move(resolution), quantum_bits);
  const int n = g.dim();
  if (boxes.size() > 16) throw std::invalid_argument("from_boxes: too many boxes");
  for (const auto& b : boxes) {
    b.validate();
    if (b.dim() != n) throw std::invalid_argument("from_boxes: box rank mismatch");
  }
  const std::uint32_t nsub = 1u << boxes.size();
  auto& occ = g.occ_;
  par::for_each(g.cell_count(), [&](std::int64_t flat) {
    const auto idx = g.unflatten(flat);
    // inclusion-exclusion over subsets of boxes, intersected with the cell
    double frac = 0.0;
    for (std::uint32_t mask = 1; mask < nsub; ++mask) {
      double vol = 1.0;
      for (int i = 0; i < n && vol > 0.0; ++i) {
        const double clo = g.box_.lo[static_cast<std::size_t>(i)] +
                           static_cast<double>(idx[static_cast<std::size_t>(i)]) *
                               g.width_[static_cast<std::size_t>(i)];
        const double chi = clo + g.width_[static_cast<std::size_t>(i)];
        double lo = clo, hi = chi;
        for (std::size_t bi = 0; bi < boxes.size(); ++bi) {
          if (!(mask & (1u << bi))) continue;
          lo = std::max(lo, boxes[bi].lo[static_cast<std::size_t>(i)]);
          hi = std::min(hi, boxes[bi].hi[static_cast<std::size_t>(i)]);
        }
        vol *= std::max(0.0, hi - lo) / g.width_[static_cast<std::size_t>(i)];
      }
      frac += (__builtin_popcount(mask) % 2 == 1 ? 1.0 : -1.0) * vol;
    }
    occ[static_cast<std::size_t>(flat)] = quantize(frac, g.quantum_bits_);
  });
  return g;
}

GridSet GridSet::random_union(Box domain, std::vector<int> resolution, const CounterRng& rng,
                              int max_boxes) {
  domain.validate();
  const int n = domain.dim();
  const int nb = 1 + static_cast<int>(rng.index(0, static_cast<std::uint64_t>(max_boxes)));
  std::vector<Box> boxes;
  std::uint64_t c = 1;
  for (int b = 0; b < nb; ++b) {
    Box bx;
    bx.lo.resize(static_cast<std::size_t>(n));
    bx.hi.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double lo = domain.lo[static_cast<std::size_t>(i)];
      const double hi = domain.hi[static_cast<std::size_t>(i)];
      const double a = rng.uniform(c++, lo, hi);
      const double b2 = rng.uniform(c++, lo, hi);
      double x0 = std::min(a, b2), x1 = std::max(a, b2);
      if (x1 - x0 < 0.05 * (hi - lo)) x1 = std::min(hi, x0 + 0.05 * (hi - lo));
      bx.lo[static_cast<std::size_t>(i)] = x0;
      bx.hi[static_cast<std::size_t>(i)] = x1;
    }
    boxes.push_back(std::move(bx));
  }
  return from_boxes(std::move(domain), std::move(resolution), boxes);
}

void GridSet::write_binary(std::ostream& os) const {
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
  for (double o : occ_) {
    const float f = static_cast<float>(o);
    os.write(reinterpret_cast<const char*>(&f), sizeof f);
  }
  if (!os) throw std::runtime_error("gridset: write failed");
}

GridSet GridSet::read_binary(std::istream& is) {
  std::uint32_t n = 0;
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!is || n == 0 || n > 16) throw std::runtime_error("gridset: bad header");
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
  if (!is) throw std::runtime_error("gridset: truncated header");
  GridSet g(std::move(box), std::move(res));
  for (auto& o : g.occ_) {
    float f = 0;
    is.read(reinterpret_cast<char*>(&f), sizeof f);
    o = quantize(static_cast<double>(f), g.quantum_bits_);
  }
  if (!is) throw std::runtime_error("gridset: truncated body");
  return g;
}

std::string GridSet::to_json() const {
  nlohmann::ordered_json j;
  j["box"] = {{"lo", box_.lo}, {"hi", box_.hi}};
  j["resolution"] = res_;
  j["quantum_bits"] = quantum_bits_;
  j["occupancy"] = occ_;
  return j.dump();
}

GridSet GridSet::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Box box;
  box.lo = j.at("box").at("lo").get<std::vector<double>>();
  box.hi = j.at("box").at("hi").get<std::vector<double>>();
  const int qb = j.value("quantum_bits", static_cast<int>(kDefaultQuantumBits));
  GridSet g(std::move(box), j.at("resolution").get<std::vector<int>>(), qb);
  auto occ = j.at("occupancy").get<std::vector<double>>();
  if (occ.size() != g.occ_.size()) throw std::runtime_error("gridset json: occupancy size mismatch");
  for (std::size_t i = 0; i < occ.size(); ++i) g.set_occupancy(static_cast<std::int64_t>(i), occ[i]);
  return g;
}

}  // namespace polyxform
