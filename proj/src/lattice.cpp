#include "thinannuli/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>

namespace thinannuli {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Bound on the rounding error of squared_norm() at p, generous by a
// constant factor.
double norm_tolerance(const LatticeSpec& lattice, LatticePoint p, double threshold) {
  const double na = std::abs(static_cast<double>(p.n) * lattice.alpha());
  const double s = std::abs(static_cast<double>(p.m)) + na;
  const double v = static_cast<double>(p.n) * lattice.beta();
  return 16.0 * kEps * (s * s + v * v + std::abs(threshold));
}

// Both fast-path endpoints of a row, or nothing if either sits too close to
// an integer to be trusted.
bool fast_row_range(const LatticeSpec& lattice, std::int64_t n, double threshold, RowRange& out) {
  const double c = -static_cast<double>(n) * lattice.alpha();
  const double v = static_cast<double>(n) * lattice.beta();
  const double d = threshold - v * v;
  if (!(d > 1e-6 * threshold) || d <= 0.0) return false;
  const double w = std::sqrt(d);
  const double err = 8.0 * kEps * (std::abs(c) + w + (std::abs(threshold) + v * v) / w + 1.0);

  const double x_hi = c + w;
  const double x_lo = c - w;
  const double f_hi = std::floor(x_hi);
  const double c_lo = std::ceil(x_lo);
  if (x_hi - f_hi <= err || f_hi + 1.0 - x_hi <= err) return false;
  if (c_lo - x_lo <= err || x_lo - (c_lo - 1.0) <= err) return false;
  out = {static_cast<std::int64_t>(c_lo), static_cast<std::int64_t>(f_hi)};
  return true;
}

}  // namespace

std::int64_t default_budget() {
  if (const char* env = std::getenv("THINANNULI_BUDGET")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return 200'000'000;
}

LatticeSpec::LatticeSpec(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !(beta > 0.0))
    throw DomainError("lattice requires finite alpha and beta > 0");
}

LatticeSpec LatticeSpec::default_generic() {
  return LatticeSpec(std::numbers::pi - 3.0, std::numbers::e / 2.0);
}

double squared_norm(const LatticeSpec& lattice, LatticePoint p) {
  const double u = static_cast<double>(p.m) + static_cast<double>(p.n) * lattice.alpha();
  const double v = static_cast<double>(p.n) * lattice.beta();
  return u * u + v * v;
}

Extended squared_norm_extended(const LatticeSpec& lattice, LatticePoint p) {
  const Extended u = Extended(p.m) + Extended(p.n) * Extended(lattice.alpha());
  const Extended v = Extended(p.n) * Extended(lattice.beta());
  return u * u + v * v;
}

double dual_squared_norm(const LatticeSpec& lattice, DualPoint k) {
  const double xi = lattice.xi();
  const double eta = lattice.eta();
  const double a = static_cast<double>(k.a);
  const double b = static_cast<double>(k.b);
  return a * a + 2.0 * a * b * xi + b * b * (xi * xi + eta * eta);
}

SquaredThreshold SquaredThreshold::from_radius(double t) {
  return {t * t, Extended(t) * Extended(t)};
}

SquaredThreshold SquaredThreshold::from_squared(double r2) { return {r2, Extended(r2)}; }

bool within(const LatticeSpec& lattice, LatticePoint p, const SquaredThreshold& threshold) {
  const double q = squared_norm(lattice, p);
  const double tol = norm_tolerance(lattice, p, threshold.approx);
  if (q < threshold.approx - tol) return true;
  if (q > threshold.approx + tol) return false;
  return squared_norm_extended(lattice, p) <= threshold.exact;
}

RowRange row_range(const LatticeSpec& lattice, std::int64_t n, const SquaredThreshold& threshold) {
  RowRange r{};
  if (fast_row_range(lattice, n, threshold.approx, r)) return r;

  const double c = -static_cast<double>(n) * lattice.alpha();
  const double v = static_cast<double>(n) * lattice.beta();
  const double w = std::sqrt(std::max(threshold.approx - v * v, 0.0));
  std::int64_t lo = static_cast<std::int64_t>(std::ceil(c - w));
  std::int64_t hi = static_cast<std::int64_t>(std::floor(c + w));
  // The admissible set is an interval within one step of the estimate.
  const auto in = [&](std::int64_t m) { return within(lattice, {m, n}, threshold); };
  if (lo > hi) {
    const auto m0 = static_cast<std::int64_t>(std::llround(c));
    if (!in(m0)) return {1, 0};
    lo = hi = m0;
  }
  while (in(hi + 1)) ++hi;
  while (hi >= lo && !in(hi)) --hi;
  while (in(lo - 1)) --lo;
  while (lo <= hi && !in(lo)) ++lo;
  if (lo > hi) return {1, 0};
  return {lo, hi};
}

namespace {

std::int64_t max_row(const LatticeSpec& lattice, double radius) {
  return static_cast<std::int64_t>(std::floor(radius / lattice.beta())) + 1;
}

}  // namespace

std::int64_t count_disc(const LatticeSpec& lattice, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("count_disc requires t >= 0");
  const auto threshold = SquaredThreshold::from_radius(t);
  const std::int64_t rows = max_row(lattice, t);
  std::int64_t total = 0;
  for (std::int64_t n = -rows; n <= rows; ++n) total += row_range(lattice, n, threshold).size();
  return total;
}

std::int64_t count_annulus(const LatticeSpec& lattice, AnnulusQuery q) {
  if (!(q.t >= 0.0) || !(q.rho > 0.0) || !std::isfinite(q.t + q.rho))
    throw DomainError("count_annulus requires t >= 0 and rho > 0");
  const auto inner = SquaredThreshold::from_radius(q.t);
  const auto outer = SquaredThreshold::from_radius(q.t + q.rho);
  const std::int64_t rows = max_row(lattice, q.t + q.rho);
  std::int64_t total = 0;
  for (std::int64_t n = -rows; n <= rows; ++n) {
    const RowRange o = row_range(lattice, n, outer);
    if (o.size() == 0) continue;
    total += o.size() - row_range(lattice, n, inner).size();
  }
  return total;
}

double sharp_statistic(const LatticeSpec& lattice, AnnulusQuery q) {
  if (!(q.t > 0.0)) throw DomainError("sharp_statistic requires t > 0");
  const double count = static_cast<double>(count_annulus(lattice, q));
  const double area = std::numbers::pi / lattice.beta() * (2.0 * q.t * q.rho + q.rho * q.rho);
  return (count - area) / std::sqrt(q.t);
}

double disc_error(const LatticeSpec& lattice, double t) {
  return static_cast<double>(count_disc(lattice, t)) - std::numbers::pi / lattice.beta() * t * t;
}

double normalized_disc_error(const LatticeSpec& lattice, double t) {
  if (!(t > 0.0)) throw DomainError("normalized disc error requires t > 0");
  return disc_error(lattice, t) / std::sqrt(t);
}

bool norms_coincide(double x, double y) {
  return std::abs(x - y) < 1e-9 * std::max({1.0, std::abs(x), std::abs(y)});
}

std::vector<LatticePoint> enumerate_points(const LatticeSpec& lattice, double bound,
                                           std::int64_t budget) {
  if (!(bound >= 0.0) || !std::isfinite(bound)) throw DomainError("norm bound must be >= 0");
  const double estimate = std::numbers::pi * bound / lattice.determinant();
  if (estimate > static_cast<double>(budget))
    throw BudgetError("enumeration of ~" + std::to_string(static_cast<long long>(estimate)) +
                      " points exceeds budget " + std::to_string(budget));
  const auto threshold = SquaredThreshold::from_squared(bound);
  const std::int64_t rows = max_row(lattice, std::sqrt(bound));
  std::vector<LatticePoint> points;
  points.reserve(static_cast<std::size_t>(estimate + 4.0 * std::sqrt(bound) + 8.0));
  for (std::int64_t n = -rows; n <= rows; ++n) {
    const RowRange r = row_range(lattice, n, threshold);
    for (std::int64_t m = r.lo; m <= r.hi; ++m) points.push_back({m, n});
  }
  return points;
}

std::vector<NormShell> merge_norms(std::vector<double> norms) {
  std::sort(norms.begin(), norms.end());
  std::vector<NormShell> shells;
  for (const double x : norms) {
    if (!shells.empty() && norms_coincide(shells.back().squared_norm, x))
      ++shells.back().multiplicity;
    else
      shells.push_back({x, 1});
  }
  return shells;
}

std::vector<NormShell> enumerate_norms(const LatticeSpec& lattice, double bound, bool use_dual,
                                       std::int64_t budget) {
  // The dual of <1, tau> is (i/beta) <1, tau>: Re(conj(i z / beta) w) is an
  // integer for z, w in Lambda. Its norms are Lambda's divided by beta^2.
  const double scale = use_dual ? lattice.beta() * lattice.beta() : 1.0;
  const auto points = enumerate_points(lattice, bound * scale, budget);
  std::vector<double> norms;
  norms.reserve(points.size());
  for (const auto& p : points) norms.push_back(squared_norm(lattice, p) / scale);
  return merge_norms(std::move(norms));
}

NormGap norm_gap(const LatticeSpec& lattice, double x, double window) {
  if (!(x > 0.0) || !(window > 0.0)) throw DomainError("norm_gap requires x > 0 and window > 0");
  const double lo = std::max(0.0, x - window);
  const double hi = x + window;
  auto shells = enumerate_norms(lattice, hi, false);
  std::erase_if(shells, [&](const NormShell& s) { return s.squared_norm < lo; });
  if (shells.size() < 2) throw InconclusiveError("window contains fewer than two distinct norms");

  std::size_t k = 0;
  for (std::size_t i = 1; i < shells.size(); ++i) {
    // Strict comparison keeps the smaller norm on an exact midpoint.
    if (std::abs(shells[i].squared_norm - x) < std::abs(shells[k].squared_norm - x)) k = i;
  }
  const double nearest = shells[k].squared_norm;
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double below = k > 0 ? nearest - shells[k - 1].squared_norm : inf;
  const double above = k + 1 < shells.size() ? shells[k + 1].squared_norm - nearest : inf;
  const double gap = std::min(below, above);
  // A missing neighbour may hide beyond the window edge.
  if (below == inf && lo > 0.0 && gap > nearest - lo)
    throw InconclusiveError("window too small below the nearest norm");
  if (above == inf && gap > hi - nearest)
    throw InconclusiveError("window too small above the nearest norm");
  return {nearest, gap};
}

}  // namespace thinannuli
