#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polyxform/rng.hpp"

namespace polyxform {

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const;
  void validate() const;  // lo < hi per axis
};

// Axis-aligned grid over a box with per-cell fractional occupancy in [0,1].
// Occupancies are kept as exact multiples of 2^-quantum_bits (dyadic), which
// makes mass bookkeeping exact: mass_units() is an integer and operations
// like symmetrization preserve it exactly, not just to rounding.
// Cell layout is row-major in axis order.
class GridSet {
 public:
  static constexpr int kDefaultQuantumBits = 24;

  GridSet(Box box, std::vector<int> resolution, int quantum_bits = kDefaultQuantumBits);

  // Rasterize a union of boxes: per cell, the exact overlap fraction of the
  // union (inclusion-exclusion), rounded to the occupancy quantum.
  static GridSet from_boxes(Box domain, std::vector<int> resolution,
                            const std::vector<Box>& boxes,
                            int quantum_bits = kDefaultQuantumBits);

  // Random union of 1..max_boxes boxes inside domain, for property tests.
  static GridSet random_union(Box domain, std::vector<int> resolution, const CounterRng& rng,
                              int max_boxes = 3);

  int dim() const { return box_.dim(); }
  const Box& box() const { return box_; }
  const std::vector<int>& resolution() const { return res_; }
  std::int64_t cell_count() const { return static_cast<std::int64_t>(occ_.size()); }
  int quantum_bits() const { return quantum_bits_; }

  double cell_width(int axis) const { return width_[static_cast<std::size_t>(axis)]; }
  double cell_volume() const;

  double occupancy(std::int64_t flat) const { return occ_[static_cast<std::size_t>(flat)]; }
  const std::vector<double>& occupancies() const { return occ_; }
  // v must be a multiple of the quantum in [0,1].
  void set_occupancy(std::int64_t flat, double v);

  std::vector<std::int64_t> unflatten(std::int64_t flat) const;
  std::int64_t flatten(const std::vector<std::int64_t>& idx) const;
  std::vector<double> cell_center(std::int64_t flat) const;

  // Occupancy of the cell containing the point; 0 outside the box.
  double occupancy_at(const std::vector<double>& pt) const;

  // Exact integer mass: sum of occupancies in units of 2^-quantum_bits.
  std::uint64_t mass_units() const;
  // mass_units scaled back to cells times cell volume.
  double measure() const;
  // Total volume of partially occupied cells (0 < occ < 1); grid-boundary
  // uncertainty for tolerance bookkeeping.
  double boundary_cell_volume() const;

  // Binary layout: u32 dim, then per axis f64 lo / f64 hi, then per axis
  // u32 resolution, then cell occupancies as f32 row-major. Values are
  // re-quantized on read (f32 cannot carry quanta finer than 2^-24).
  void write_binary(std::ostream& os) const;
  static GridSet read_binary(std::istream& is);
  std::string to_json() const;
  static GridSet from_json(const std::string& text);

 private:
  void init_geometry();

  Box box_;
  std::vector<int> res_;
  std::vector<double> width_;
  std::vector<std::int64_t> stride_;
  std::vector<double> occ_;
  int quantum_bits_;

  friend class GridSetTestPeer;
};

}  // namespace polyxform
