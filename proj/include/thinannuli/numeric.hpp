#pragma once

// Shared numeric plumbing: the extended-precision scalar used for tie
// resolution and tiny minima, compensated summation, and the error types
// every module throws.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace thinannuli {

// 113-bit significand; exact for products of two doubles.
using Extended = boost::multiprecision::cpp_bin_float_quad;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An enumeration would exceed the configured point/work budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A scan finished but its window did not contain enough data to decide.
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default enumeration cap (lattice points or inner-loop iterations).
/// Overridden by the THINANNULI_BUDGET environment variable.
std::int64_t default_budget();

/// Neumaier's variant of Kahan summation. Order of add() calls is the
/// caller's responsibility.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace thinannuli
