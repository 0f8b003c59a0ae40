#pragma once

// Close pairs of lattice points and the signature-(2,2) form
//   Q1(v) = (v1 + v2 a)^2 + (v2 b)^2 - (v3 + v4 a)^2 - (v4 b)^2
// whose small values encode them.

#include "thinannuli/lattice.hpp"

#include <array>
#include <functional>
#include <cstdint>
#include <vector>

namespace thinannuli {

struct QuadFormQ1 {
  LatticeSpec lattice;
};

using IntVec4 = std::array<std::int64_t, 4>;

/// squared_norm(v1, v2) - squared_norm(v3, v4)
double q1_evaluate(const QuadFormQ1& form, const IntVec4& v);

// Ordered pairs (k, l) with R <= |k|^2 <= 2R and |k|^2 <= |l|^2 <= |k|^2 + delta.
struct ClosePairQuery {
  double R;
  double delta;

  void validate() const;
};

/// Exact #A(R, delta): one enumeration, a sort, and a two-pointer sweep.
std::int64_t count_close_pairs(const LatticeSpec& lattice, ClosePairQuery q,
                               std::int64_t budget = default_budget());

/// Calls `visit(k, l)` for every pair counted by count_close_pairs, in sweep
/// order. Intended for small R.
void for_each_close_pair(const LatticeSpec& lattice, ClosePairQuery q,
                         const std::function<void(LatticePoint, LatticePoint)>& visit,
                         std::int64_t budget = default_budget());

struct ShellCount {
  std::int64_t count = 0;
  // Extremes of squared_norm(v1, v2) / T^2 and squared_norm(v3, v4) / T^2
  // over the counted vectors (zero when count == 0).
  double min_norm_ratio = 0.0;
  double max_norm_ratio = 0.0;
};

/// #{v in Z^4 : T <= |v| <= 2T, a < Q1(v) < b} by direct enumeration.
/// Refuses T above `max_T`.
ShellCount count_shell_solutions(const QuadFormQ1& form, double a, double b, double T,
                                 double max_T = 64.0);

struct ScalingRow {
  double R;
  double delta;
  std::int64_t count;
  double normalized;  // count / (R delta ln R)
};

std::vector<ScalingRow> close_pair_scaling_study(const LatticeSpec& lattice,
                                                 const std::vector<double>& R_grid, double delta,
                                                 std::int64_t budget = default_budget());

}  // namespace thinannuli
