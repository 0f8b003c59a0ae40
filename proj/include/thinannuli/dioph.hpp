#pragma once

// Empirical Diophantine probes: minima of integer linear forms and integer
// polynomials at real points, and signed sums of square roots of dual norms.
//
// All inputs are Extended so that algebraic numbers such as sqrt(2) can be
// supplied to full precision; screening runs in double and every candidate
// below 1e-10 is re-evaluated in Extended. A value below 1e-30 there is an
// exact zero, i.e. an integer relation.

#include "thinannuli/lattice.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace thinannuli {

inline constexpr double kRefineBelow = 1e-10;
inline constexpr double kExactZero = 1e-30;

struct DiophQuery {
  std::vector<Extended> tuple;
  std::int64_t height_cap = 1000;

  void validate() const;
};

struct HeightMinimum {
  std::int64_t q;
  double min_value;
};

// An integer vector (a0, a1, ..., an) at which the form vanishes.
struct Relation {
  std::vector<std::int64_t> coefficients;
  std::int64_t height;
};

struct ExponentFit {
  std::vector<HeightMinimum> minima;
  double fitted_exponent = 0.0;  // slope of -log(min) against log(q)
  double fit_residual = 0.0;     // RMS residual of that fit
  std::optional<Relation> relation;
};

/// 1, 2, 4, ... below cap, then cap itself.
std::vector<std::int64_t> height_grid(std::int64_t cap);

/// min |a0 + sum a_i alpha_i| over nonzero integer vectors of height <= q,
/// for each q on height_grid(height_cap). Length <= 3; height_cap <= 1000
/// (n <= 2) or 100 (n == 3).
ExponentFit linear_form_minimum(const DiophQuery& q);

/// The same minimization for an arbitrary number of values, checked only
/// against `budget` inner iterations.
ExponentFit minimize_linear_form(const std::vector<Extended>& values, std::int64_t height_cap,
                                 std::int64_t budget);

/// min |p(x, y)| over nonzero integer polynomials of total degree <= degree
/// and height <= h. Monomial order: for d = 1..degree, x^d, x^{d-1} y, ...,
/// y^d, so degree 1 is exactly linear_form_minimum on (x, y).
ExponentFit polynomial_minimum(const Extended& x, const Extended& y, int degree,
                               std::int64_t height_cap, std::int64_t budget = 200'000'000);

enum class DualFilter { primitive, all };

struct SqrtSumGap {
  double value = 0.0;
  double empirical_K = 0.0;          // log(1/value) / log(bound)
  bool nonsymbolic_zero = false;     // a true zero not explained by cancellation
  std::vector<double> terms;         // z_j of the minimizing combination
  std::vector<int> signs;
};

/// min |sum_j eps_j sqrt(z_j)| over m dual squared norms z_j <= bound taken
/// from (a, b) with a, b >= 0 (primitive only by default) and signs
/// eps_j = +-1. Combinations that cancel term by term are skipped.
SqrtSumGap sqrt_sum_gap(const LatticeSpec& lattice, double bound, int m,
                        DualFilter filter = DualFilter::primitive,
                        std::int64_t budget = 200'000'000);

/// The same minimization over an explicit list of squared norms.
SqrtSumGap sqrt_sum_gap_of(std::vector<Extended> z, int m, double bound,
                           std::int64_t budget = 200'000'000);

/// Parses a real constant expression: numbers, pi, e, sqrt(...), + - * /,
/// parentheses and integer powers, evaluated in Extended.
Extended parse_real(const std::string& text);

}  // namespace thinannuli
