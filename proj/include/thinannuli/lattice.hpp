#pragma once

// Exact sharp counting for planar lattices <1, alpha + i beta>.
//
// Discs are closed (|x| <= t) and annuli half-open (t, t+rho]. Points whose
// double-precision squared norm lies within a few ulps of the threshold are
// classified by re-evaluating the norm in Extended precision, so counts do
// not depend on the rounding of the fast path.

#include "thinannuli/numeric.hpp"

#include <cstdint>
#include <vector>

namespace thinannuli {

class LatticeSpec {
 public:
  LatticeSpec(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double determinant() const { return beta_; }

  // Parameters (xi, eta) = (-alpha/beta, 1/beta) of the lattice <1, xi + i eta>
  // used by the Diophantine probes. It shares the dual's covolume 1/beta but is
  // isometric to the true dual (i/beta) * Lambda only when alpha = 0 or
  // beta = 1; spectral sums go through enumerate_norms(..., true) instead.
  double xi() const { return -alpha_ / beta_; }
  double eta() const { return 1.0 / beta_; }
  LatticeSpec dual() const { return LatticeSpec(xi(), eta()); }

  /// (pi - 3, e/2)
  static LatticeSpec default_generic();

  bool operator==(const LatticeSpec&) const = default;

 private:
  double alpha_;
  double beta_;
};

struct LatticePoint {
  std::int64_t m = 0;
  std::int64_t n = 0;
  bool operator==(const LatticePoint&) const = default;
};

// Coordinates in the dual basis {1, xi + i eta}.
struct DualPoint {
  std::int64_t a = 0;
  std::int64_t b = 0;
};

struct AnnulusQuery {
  double t;
  double rho;
};

/// (m + n alpha)^2 + (n beta)^2, evaluated as u = m + n*alpha, v = n*beta,
/// u*u + v*v.
double squared_norm(const LatticeSpec& lattice, LatticePoint p);
Extended squared_norm_extended(const LatticeSpec& lattice, LatticePoint p);

/// a^2 + 2ab xi + b^2 (xi^2 + eta^2)
double dual_squared_norm(const LatticeSpec& lattice, DualPoint k);

// A squared-radius threshold with its exact value alongside the double used
// by the fast path. For a radius t the exact value is t*t without rounding.
struct SquaredThreshold {
  double approx;
  Extended exact;

  static SquaredThreshold from_radius(double t);
  static SquaredThreshold from_squared(double r2);
};

/// True iff squared_norm(p) <= threshold, decided exactly near the boundary.
bool within(const LatticeSpec& lattice, LatticePoint p, const SquaredThreshold& threshold);

// Admissible m for a fixed row n: the contiguous range [lo, hi], empty when
// lo > hi.
struct RowRange {
  std::int64_t lo;
  std::int64_t hi;
  std::int64_t size() const { return hi >= lo ? hi - lo + 1 : 0; }
};

RowRange row_range(const LatticeSpec& lattice, std::int64_t n, const SquaredThreshold& threshold);

/// #{(m, n) : squared_norm <= t^2}. Rows n ascending, O(t / beta).
std::int64_t count_disc(const LatticeSpec& lattice, double t);

/// Points with squared norm in (t^2, (t+rho)^2], in one pass over rows.
std::int64_t count_annulus(const LatticeSpec& lattice, AnnulusQuery q);

/// (N(t+rho) - N(t) - (pi/beta)(2 t rho + rho^2)) / sqrt(t)
double sharp_statistic(const LatticeSpec& lattice, AnnulusQuery q);

/// N(t) - (pi/beta) t^2
double disc_error(const LatticeSpec& lattice, double t);
/// disc_error(t) / sqrt(t), t > 0
double normalized_disc_error(const LatticeSpec& lattice, double t);

struct NormShell {
  double squared_norm;
  std::int64_t multiplicity;
};

/// Two squared norms coincide iff they differ by less than
/// 1e-9 * max(1, x).
bool norms_coincide(double x, double y);

/// Every lattice point with squared norm <= bound, in (n, m) ascending order.
/// Throws BudgetError when pi * bound / det exceeds `budget`.
std::vector<LatticePoint> enumerate_points(const LatticeSpec& lattice, double bound,
                                           std::int64_t budget = default_budget());

/// Sorted squared norms <= bound of the lattice, or of its dual
/// (i/beta) * Lambda whose squared norms are squared_norm / beta^2, with
/// coinciding norms merged.
std::vector<NormShell> enumerate_norms(const LatticeSpec& lattice, double bound, bool use_dual,
                                       std::int64_t budget = default_budget());

/// Merge an arbitrary list of squared norms into sorted shells. The result
/// does not depend on the input order.
std::vector<NormShell> merge_norms(std::vector<double> norms);

struct NormGap {
  double nearest;  // squared norm closest to x (ties toward the smaller)
  double gap;      // distance from `nearest` to the closest other squared norm
};

/// Scans squared norms in [x - window, x + window]. Throws InconclusiveError
/// if the window cannot certify the gap.
NormGap norm_gap(const LatticeSpec& lattice, double x, double window);

}  // namespace thinannuli
