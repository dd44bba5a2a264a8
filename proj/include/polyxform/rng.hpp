#pragma once

#include <cstdint>

namespace polyxform {

// Counter-based generator: draw i of a stream is a pure function of
// (seed, stream, i), so parallel consumers can pull values by index in any
// order and still reproduce bit-identical results. Core is the splitmix64
// finalizer applied to the keyed counter.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed, 0x426f5c9d6ac2f1b3ull ^ stream)) {}

  std::uint64_t bits(std::uint64_t counter) const { return mix(key_, counter); }

  // Uniform in [0, 1), a multiple of 2^-53.
  double u01(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * u01(counter);
  }

  // Integer in [0, m), m > 0.
  std::uint64_t index(std::uint64_t counter, std::uint64_t m) const { return bits(counter) % m; }

  CounterRng fork(std::uint64_t substream) const {
    CounterRng r(0);
    r.key_ = mix(key_, 0x9e3779b97f4a7c15ull + substream);
    return r;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b));
  }

  std::uint64_t key_;
};

}  // namespace polyxform
