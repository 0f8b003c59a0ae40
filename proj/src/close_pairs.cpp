#include "thinannuli/close_pairs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace thinannuli {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Entry {
  double q;
  double tol;
  LatticePoint p;
};

class ExactNorms {
 public:
  explicit ExactNorms(const LatticeSpec& lattice) : lattice_(lattice) {}

  Entry entry(LatticePoint p) const {
    const double q = squared_norm(lattice_, p);
    const double s = std::abs(static_cast<double>(p.m)) +
                     std::abs(static_cast<double>(p.n) * lattice_.alpha());
    const double v = static_cast<double>(p.n) * lattice_.beta();
    return {q, 16.0 * kEps * (s * s + v * v + q), p};
  }

  // Sign of |a|^2 - |b|^2, exact near ties.
  int compare(const Entry& a, const Entry& b) const {
    if (a.p.m == -b.p.m && a.p.n == -b.p.n) return 0;
    const double tol = a.tol + b.tol;
    if (a.q < b.q - tol) return -1;
    if (a.q > b.q + tol) return 1;
    const Extended ea = squared_norm_extended(lattice_, a.p);
    const Extended eb = squared_norm_extended(lattice_, b.p);
    return ea < eb ? -1 : (eb < ea ? 1 : 0);
  }

  // |l|^2 - |k|^2 <= delta
  bool within_delta(const Entry& k, const Entry& l, double delta) const {
    const double d = l.q - k.q;
    const double tol = k.tol + l.tol + 4.0 * kEps * std::abs(delta);
    if (d < delta - tol) return true;
    if (d > delta + tol) return false;
    return squared_norm_extended(lattice_, l.p) - squared_norm_extended(lattice_, k.p) <=
           Extended(delta);
  }

  // R <= |k|^2 <= 2R
  bool in_base_shell(const Entry& k, double R) const {
    const auto lower_ok = [&] {
      if (k.q > R + k.tol) return true;
      if (k.q < R - k.tol) return false;
      return squared_norm_extended(lattice_, k.p) >= Extended(R);
    };
    return lower_ok() && within(lattice_, k.p, SquaredThreshold::from_squared(2.0 * R));
  }

 private:
  LatticeSpec lattice_;
};

template <class Visit>
std::int64_t sweep(const LatticeSpec& lattice, ClosePairQuery q, std::int64_t budget, Visit&& visit) {
  q.validate();
  const ExactNorms exact(lattice);
  const double bound = (2.0 * q.R + q.delta) * (1.0 + 1e-12) + 1e-12;
  const auto points = enumerate_points(lattice, bound, budget);

  std::vector<Entry> entries;
  entries.reserve(points.size());
  for (const auto& p : points) entries.push_back(exact.entry(p));
  std::sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
    const int c = exact.compare(a, b);
    if (c != 0) return c < 0;
    return a.p.n != b.p.n ? a.p.n < b.p.n : a.p.m < b.p.m;
  });

  std::int64_t total = 0;
  std::size_t group = 0;
  std::size_t hi = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && exact.compare(entries[i - 1], entries[i]) != 0) group = i;
    if (!exact.in_base_shell(entries[i], q.R)) continue;
    hi = std::max(hi, i + 1);
    while (hi < entries.size() && exact.within_delta(entries[i], entries[hi], q.delta)) ++hi;
    total += static_cast<std::int64_t>(hi - group);
    visit(i, group, hi, entries);
  }
  return total;
}

}  // namespace

double q1_evaluate(const QuadFormQ1& form, const IntVec4& v) {
  return squared_norm(form.lattice, {v[0], v[1]}) - squared_norm(form.lattice, {v[2], v[3]});
}

void ClosePairQuery::validate() const {
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("close pairs require R > 0");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("close pairs require delta >= 0");
}

std::int64_t count_close_pairs(const LatticeSpec& lattice, ClosePairQuery q, std::int64_t budget) {
  return sweep(lattice, q, budget, [](std::size_t, std::size_t, std::size_t, const auto&) {});
}

void for_each_close_pair(const LatticeSpec& lattice, ClosePairQuery q,
                         const std::function<void(LatticePoint, LatticePoint)>& visit,
                         std::int64_t budget) {
  sweep(lattice, q, budget,
        [&](std::size_t i, std::size_t lo, std::size_t hi, const std::vector<Entry>& entries) {
          for (std::size_t j = lo; j < hi; ++j) visit(entries[i].p, entries[j].p);
        });
}

ShellCount count_shell_solutions(const QuadFormQ1& form, double a, double b, double T,
                                 double max_T) {
  if (!(a < b)) throw DomainError("shell count requires a < b");
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("shell count requires T > 0");
  if (T > max_T) throw BudgetError("shell enumeration radius exceeds cap");

  const double inner2 = T * T;
  const double outer2 = 4.0 * T * T;
  const auto r = static_cast<std::int64_t>(std::floor(2.0 * T));
  ShellCount out;
  out.min_norm_ratio = std::numeric_limits<double>::infinity();
  out.max_norm_ratio = 0.0;

  for (std::int64_t v1 = -r; v1 <= r; ++v1)
    for (std::int64_t v2 = -r; v2 <= r; ++v2) {
      const double s2 = static_cast<double>(v1 * v1 + v2 * v2);
      if (s2 > outer2) continue;
      const double p12 = squared_norm(form.lattice, {v1, v2});
      for (std::int64_t v3 = -r; v3 <= r; ++v3) {
        const double s3 = s2 + static_cast<double>(v3 * v3);
        if (s3 > outer2) continue;
        const auto top = static_cast<std::int64_t>(std::floor(std::sqrt(outer2 - s3)));
        for (std::int64_t v4 = -top; v4 <= top; ++v4) {
          const double s4 = s3 + static_cast<double>(v4 * v4);
          if (s4 < inner2 || s4 > outer2) continue;
          const double p34 = squared_norm(form.lattice, {v3, v4});
          const double q = p12 - p34;
          if (!(a < q && q < b)) continue;
          ++out.count;
          out.min_norm_ratio = std::min({out.min_norm_ratio, p12 / inner2, p34 / inner2});
          out.max_norm_ratio = std::max({out.max_norm_ratio, p12 / inner2, p34 / inner2});
        }
      }
    }
  if (out.count == 0) out.min_norm_ratio = 0.0;
  return out;
}

std::vector<ScalingRow> close_pair_scaling_study(const LatticeSpec& lattice,
                                                 const std::vector<double>& R_grid, double delta,
                                                 std::int64_t budget) {
  // The normalization divides by delta.
  if (!(delta > 0.0)) throw DomainError("scaling study requires delta > 0");
  std::vector<ScalingRow> rows;
  for (const double R : R_grid) {
    if (!(R >= 10.0)) throw DomainError("scaling study requires R >= 10");
    const std::int64_t c = count_close_pairs(lattice, {R, delta}, budget);
    rows.push_back({R, delta, c, static_cast<double>(c) / (R * delta * std::log(R))});
  }
  return rows;
}

}  // namespace thinannuli
