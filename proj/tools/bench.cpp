// Timing harness for the OpenMP kernels against their serial reference
// twins. The parallel reductions are chunked pairwise folds, so results must
// be bit-identical across thread counts; the table prints that check next to
// the speedup.
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <vector>

#include "polyxform/family.hpp"
#include "polyxform/gridset.hpp"
#include "polyxform/measures.hpp"
#include "polyxform/parallel.hpp"
#include "polyxform/rng.hpp"
#include "polyxform/sampled_function.hpp"
#include "polyxform/transform.hpp"
#include "polyxform/vandermonde.hpp"

using namespace polyxform;

namespace {

double time_ms(const std::function<double()>& fn, double* result) {
  double best = 1e300;
  for (int rep = 0; rep < 3; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    *result = fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, double serial_ms, double par_ms, double serial_val, double par1_val,
         double parN_val) {
  const bool bit_identical = par1_val == parN_val;
  const double rel = std::abs(serial_val - parN_val) / std::max(1.0, std::abs(serial_val));
  std::printf("%-24s %10.2f %10.2f %8.2fx   %-3s %12.3g\n", name, serial_ms, par_ms,
              par_ms > 0 ? serial_ms / par_ms : 0.0, bit_identical ? "yes" : "NO", rel);
}

}  // namespace

int main() {
  const int nthreads = par::max_threads();
  std::printf("threads: %d\n", nthreads);
  std::printf("%-24s %10s %10s %9s   %-3s %12s\n", "kernel", "serial ms", "par ms", "speedup",
              "bit", "ref rel err");

  // Weighted measure over a fine 2-d grid union.
  {
    Box domain;
    domain.lo = {-1.5, -1.5};
    domain.hi = {1.5, 1.5};
    const CounterRng rng(20260817, 1);
    const GridSet E = GridSet::random_union(domain, {512, 512}, rng);
    MonomialWeight w;
    w.s = {1.3, 0.7};

    double serial_val = 0.0, par1 = 0.0, parN = 0.0;
    const double ts = time_ms([&] { return ref::monomial_measure(E, w); }, &serial_val);
    par::set_threads(1);
    time_ms([&] { return monomial_measure(E, w); }, &par1);
    par::set_threads(nthreads);
    const double tp = time_ms([&] { return monomial_measure(E, w); }, &parN);
    row("monomial_measure", ts, tp, serial_val, par1, parN);
  }

  // Point-tuple integral of |V| for the two-point line family.
  {
    const IndexFamily fam = full_family(1, 1, 1);
    Box b1, b2;
    b1.lo = {0.0};
    b1.hi = {1.0};
    b2.lo = {0.25};
    b2.hi = {1.75};
    Box dom;
    dom.lo = {-2.0};
    dom.hi = {2.0};
    const std::vector<GridSet> sets = {GridSet::from_boxes(dom, {2048}, {b1}),
                                       GridSet::from_boxes(dom, {2048}, {b2})};

    double serial_val = 0.0, par1 = 0.0, parN = 0.0;
    const double ts = time_ms([&] { return ref::coercivity_lhs(fam, sets); }, &serial_val);
    par::set_threads(1);
    time_ms([&] { return coercivity_ratio(fam, sets).lhs; }, &par1);
    par::set_threads(nthreads);
    const double tp = time_ms([&] { return coercivity_ratio(fam, sets).lhs; }, &parN);
    row("coercivity_lhs", ts, tp, serial_val, par1, parN);
  }

  // Averaging transform on a gaussian; parallel over integration cells. No
  // serial twin, so the 1-thread run stands in for it.
  {
    const IndexFamily fam = full_family(1, 1, 2);
    const SampledFunction f = preset_function("gauss", 2, 48);
    const ParamPoint u = {0.15, -0.35, 0.2};
    TransformOptions opts;
    opts.gl_order = 6;
    opts.t_cells = 512;

    double par1 = 0.0, parN = 0.0;
    par::set_threads(1);
    const double ts = time_ms([&] { return apply_T(fam, f, u, opts); }, &par1);
    par::set_threads(nthreads);
    const double tp = time_ms([&] { return apply_T(fam, f, u, opts); }, &parN);
    row("apply_T", ts, tp, par1, par1, parN);
  }

  par::set_threads(nthreads);
  return 0;
}
