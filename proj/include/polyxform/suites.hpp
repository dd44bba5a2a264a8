#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace polyxform {

// One named check with the measured numbers behind its verdict. Suites are
// deterministic: a fixed seed reproduces every detail string byte for byte.
struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckLine> lines;

  bool pass() const;
  std::string to_json() const;
};

// Covariance-identity suite configuration: the family is the full degree-d
// one, and `samples` is per Monte Carlo run (15 runs: 3 sets x 5 base points).
struct CovIdentityConfig {
  int n = 1;
  int nprime = 1;
  int d = 1;
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 1;
};

SuiteResult suite_polygon();
SuiteResult suite_exponents();
SuiteResult suite_measures(std::uint64_t seed = 1);
SuiteResult suite_symmetrization(std::uint64_t seed = 1);
SuiteResult suite_cov_identity(const CovIdentityConfig& cfg = {});
SuiteResult suite_symmetries(std::uint64_t seed = 1);
SuiteResult suite_sweeps(std::uint64_t seed = 1);
SuiteResult suite_coercivity(std::uint64_t seed = 1);

}  // namespace polyxform
