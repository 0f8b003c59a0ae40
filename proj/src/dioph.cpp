#include "thinannuli/dioph.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

namespace thinannuli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ipow_budget(std::int64_t base, std::size_t exponent) {
  double v = 1.0;
  for (std::size_t i = 0; i < exponent; ++i) v *= static_cast<double>(base);
  return v;
}

void fit_exponent(ExponentFit& fit) {
  std::vector<double> xs, ys;
  for (const auto& hm : fit.minima) {
    if (hm.min_value <= 0.0) continue;
    xs.push_back(std::log(static_cast<double>(hm.q)));
    ys.push_back(-std::log(hm.min_value));
  }
  if (xs.size() < 2) {
    fit.fitted_exponent = kNaN;
    fit.fit_residual = kNaN;
    return;
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    rss += r * r;
  }
  fit.fitted_exponent = slope;
  fit.fit_residual = std::sqrt(rss / n);
}

}  // namespace

void DiophQuery::validate() const {
  if (tuple.empty()) throw DomainError("tuple must be nonempty");
  if (height_cap < 1) throw DomainError("height cap must be >= 1");
  if (std::all_of(tuple.begin(), tuple.end(), [](const Extended& x) { return x == 0; }))
    throw DomainError("degenerate tuple (all zeros)");
}

std::vector<std::int64_t> height_grid(std::int64_t cap) {
  std::vector<std::int64_t> grid;
  for (std::int64_t q = 1; q < cap; q *= 2) grid.push_back(q);
  grid.push_back(cap);
  return grid;
}

ExponentFit minimize_linear_form(const std::vector<Extended>& values, std::int64_t height_cap,
                                 std::int64_t budget) {
  const std::size_t n = values.size();
  if (n == 0) throw DomainError("tuple must be nonempty");
  if (height_cap < 1) throw DomainError("height cap must be >= 1");
  if (ipow_budget(2 * height_cap + 1, n) / 2.0 > static_cast<double>(budget))
    throw BudgetError("linear form enumeration exceeds budget");

  std::vector<double> vd(n);
  for (std::size_t i = 0; i < n; ++i) vd[i] = static_cast<double>(values[i]);
  const auto grid = height_grid(height_cap);
  std::vector<double> best(grid.size(), 1.0);  // a = 0, a0 = 1
  std::optional<Relation> relation;

  std::vector<std::int64_t> a(n, -height_cap);
  for (;;) {
    // Only one of +-a is needed: require the first nonzero entry positive.
    std::size_t first = 0;
    while (first < n && a[first] == 0) ++first;
    if (first < n && a[first] > 0) {
      std::int64_t h = 0;
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        h = std::max(h, std::abs(a[i]));
        s += static_cast<double>(a[i]) * vd[i];
      }
      const auto g0 = static_cast<std::size_t>(
          std::lower_bound(grid.begin(), grid.end(), h) - grid.begin());
      const std::int64_t ideal = std::llround(-s);
      for (std::size_t g = g0; g < grid.size(); ++g) {
        const std::int64_t H = grid[g];
        const std::int64_t a0 = std::clamp(ideal, -H, H);
        double v = std::abs(static_cast<double>(a0) + s);
        if (v < kRefineBelow) {
          Extended se = a0;
          for (std::size_t i = 0; i < n; ++i) se += Extended(a[i]) * values[i];
          const Extended ve = abs(se);
          if (ve < kExactZero) {
            const std::int64_t height = std::max(h, std::abs(a0));
            if (!relation || height < relation->height) {
              Relation rel{{a0}, height};
              rel.coefficients.insert(rel.coefficients.end(), a.begin(), a.end());
              relation = std::move(rel);
            }
            v = 0.0;
          } else {
            v = static_cast<double>(ve);
          }
        }
        best[g] = std::min(best[g], v);
        if (a0 == ideal) break;  // larger heights reach the same value
      }
    }
    std::size_t i = n;
    while (i > 0 && a[i - 1] == height_cap) a[--i] = -height_cap;
    if (i == 0) break;
    ++a[i - 1];
  }

  ExponentFit fit;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (g > 0) best[g] = std::min(best[g], best[g - 1]);
    fit.minima.push_back({grid[g], best[g]});
  }
  fit.relation = std::move(relation);
  if (fit.relation) {
    fit.fitted_exponent = kNaN;
    fit.fit_residual = kNaN;
  } else {
    fit_exponent(fit);
  }
  return fit;
}

ExponentFit linear_form_minimum(const DiophQuery& q) {
  q.validate();
  const std::size_t n = q.tuple.size();
  if (n > 3) throw DomainError("linear form probe supports at most 3 values");
  const std::int64_t cap = n <= 2 ? 1000 : 100;
  if (q.height_cap > cap) throw BudgetError("height cap exceeds " + std::to_string(cap));
  return minimize_linear_form(q.tuple, q.height_cap, std::numeric_limits<std::int64_t>::max());
}

ExponentFit polynomial_minimum(const Extended& x, const Extended& y, int degree,
                               std::int64_t height_cap, std::int64_t budget) {
  if (degree < 1 || degree > 3) throw DomainError("polynomial degree must be 1..3");
  if (height_cap < 1) throw DomainError("height cap must be >= 1");
  std::vector<Extended> monomials;
  for (int d = 1; d <= degree; ++d)
    for (int i = d; i >= 0; --i) monomials.push_back(pow(x, i) * pow(y, d - i));
  return minimize_linear_form(monomials, height_cap, budget);
}

SqrtSumGap sqrt_sum_gap_of(std::vector<Extended> z, int m, double bound, std::int64_t budget) {
  if (m < 2 || m > 4) throw DomainError("sqrt sum gap supports m in {2, 3, 4}");
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end(),
                      [](const Extended& a, const Extended& b) {
                        return norms_coincide(static_cast<double>(a), static_cast<double>(b));
                      }),
          z.end());
  if (z.empty()) throw DomainError("no norms below the bound");
  const std::size_t N = z.size();
  double combos = 1.0;
  for (int j = 0; j < m; ++j) combos = combos * static_cast<double>(N + j) / (j + 1);
  if (combos * std::pow(2.0, m - 1) > static_cast<double>(budget))
    throw BudgetError("sqrt sum enumeration exceeds budget");

  std::vector<Extended> root_ext(N);
  std::vector<double> root(N);
  for (std::size_t i = 0; i < N; ++i) {
    root_ext[i] = sqrt(z[i]);
    root[i] = static_cast<double>(root_ext[i]);
  }

  SqrtSumGap out;
  out.value = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  std::vector<int> sign(static_cast<std::size_t>(m), 1);
  const auto mu = static_cast<std::size_t>(m);

  const auto consider = [&] {
    // Term-by-term cancellation: every run of equal indices has zero net sign.
    bool symbolic = true;
    for (std::size_t j = 0; j < mu && symbolic;) {
      std::size_t k = j;
      int net = 0;
      while (k < mu && idx[k] == idx[j]) net += sign[k++];
      if (net != 0) symbolic = false;
      j = k;
    }
    if (symbolic) return;
    double s = 0.0;
    for (std::size_t j = 0; j < mu; ++j) s += sign[j] * root[idx[j]];
    double v = std::abs(s);
    if (v >= out.value && !(v < kRefineBelow)) return;
    bool zero = false;
    if (v < kRefineBelow) {
      Extended se = 0;
      for (std::size_t j = 0; j < mu; ++j) se += sign[j] * root_ext[idx[j]];
      const Extended ve = abs(se);
      zero = ve < kExactZero;
      v = zero ? 0.0 : static_cast<double>(ve);
      if (v >= out.value) return;
    }
    out.value = v;
    out.nonsymbolic_zero = zero;
    out.terms.clear();
    for (std::size_t j = 0; j < mu; ++j) out.terms.push_back(static_cast<double>(z[idx[j]]));
    out.signs = sign;
  };

  // Nondecreasing index tuples; sign[0] = +1 fixes the global flip.
  const auto visit_signs = [&] {
    const unsigned patterns = 1u << (mu - 1);
    for (unsigned bits = 0; bits < patterns; ++bits) {
      for (std::size_t j = 1; j < mu; ++j) sign[j] = (bits >> (j - 1)) & 1u ? -1 : 1;
      consider();
    }
  };
  for (;;) {
    visit_signs();
    std::size_t j = mu;
    while (j > 0 && idx[j - 1] == N - 1) --j;
    if (j == 0) break;
    ++idx[j - 1];
    for (std::size_t k = j; k < mu; ++k) idx[k] = idx[j - 1];
  }

  out.empirical_K = out.value > 0.0 ? std::log(1.0 / out.value) / std::log(bound)
                                    : std::numeric_limits<double>::infinity();
  return out;
}

SqrtSumGap sqrt_sum_gap(const LatticeSpec& lattice, double bound, int m, DualFilter filter,
                        std::int64_t budget) {
  if (!(bound > 1.0) || !std::isfinite(bound)) throw DomainError("sqrt sum gap requires bound > 1");
  const Extended xi = -Extended(lattice.alpha()) / Extended(lattice.beta());
  const Extended eta = Extended(1) / Extended(lattice.beta());
  const Extended c2 = xi * xi + eta * eta;

  // z(a, b) >= (b eta)^2 and, for fixed b, z >= 0 grows like a^2 once a > b|xi|.
  const auto b_max = static_cast<std::int64_t>(std::floor(std::sqrt(bound) / lattice.eta())) + 1;
  std::vector<Extended> z;
  for (std::int64_t b = 0; b <= b_max; ++b) {
    const double center = -static_cast<double>(b) * lattice.xi();
    const auto a_max = static_cast<std::int64_t>(std::ceil(std::max(center, 0.0) + std::sqrt(bound))) + 1;
    for (std::int64_t a = 0; a <= a_max; ++a) {
      if (a == 0 && b == 0) continue;
      if (filter == DualFilter::primitive && std::gcd(a, b) != 1) continue;
      const Extended ae = a, be = b;
      const Extended value = ae * ae + 2 * ae * be * xi + be * be * c2;
      if (value <= Extended(bound)) z.push_back(value);
    }
  }
  return sqrt_sum_gap_of(std::move(z), m, bound, budget);
}

namespace {

class ExpressionParser {
 public:
  explicit ExpressionParser(const std::string& text) : s_(text) {}

  Extended parse() {
    Extended v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("cannot parse '" + s_ + "': " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool eat_word(const std::string& w) {
    skip();
    if (s_.compare(pos_, w.size(), w) != 0) return false;
    const std::size_t end = pos_ + w.size();
    if (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) return false;
    pos_ = end;
    return true;
  }

  Extended expr() {
    Extended v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }
  Extended term() {
    Extended v = factor();
    for (;;) {
      if (eat('*')) {
        v *= factor();
      } else if (eat('/')) {
        const Extended d = factor();
        if (d == 0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }
  Extended factor() {
    if (eat('-')) return -factor();
    if (eat('+')) return factor();
    Extended v = primary();
    if (eat('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      v = pow(v, std::stoi(s_.substr(start, pos_ - start)));
    }
    return v;
  }
  Extended primary() {
    if (eat('(')) {
      Extended v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (eat_word("sqrt")) {
      if (!eat('(')) fail("expected '(' after sqrt");
      Extended v = expr();
      if (!eat(')')) fail("expected ')'");
      if (v < 0) fail("sqrt of a negative number");
      return sqrt(v);
    }
    if (eat_word("pi")) return boost::math::constants::pi<Extended>();
    if (eat_word("e")) return boost::math::constants::e<Extended>();
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ > start) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    if (start == pos_) fail("expected a number");
    return Extended(s_.substr(start, pos_ - start));
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

Extended parse_real(const std::string& text) { return ExpressionParser(text).parse(); }

}  // namespace thinannuli
