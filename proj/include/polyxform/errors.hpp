#pragma once

#include <stdexcept>
#include <string>

namespace polyxform {

// Family fails one of the structural conditions; message names the first
// failed condition in check order.
class admissibility_error : public std::runtime_error {
 public:
  explicit admissibility_error(const std::string& condition)
      : std::runtime_error("family is not admissible: " + condition + " condition fails"),
        condition_(condition) {}
  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

// A test function could not be certified (e.g. derivative lower bound not
// provable on the interval).
class certification_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A Monte Carlo sampling region fails its coverage requirement.
class coverage_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace polyxform
