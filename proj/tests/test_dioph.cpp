#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "thinannuli/dioph.hpp"

#include <cmath>
#include <numbers>

using namespace thinannuli;

namespace {
Extended X(const char* s) { return parse_real(s); }
}

TEST_CASE("parse_real") {
  CHECK(static_cast<double>(X("sqrt(2)")) == doctest::Approx(std::numbers::sqrt2));
  CHECK(static_cast<double>(X("pi-3")) == doctest::Approx(std::numbers::pi - 3.0));
  CHECK(static_cast<double>(X("e/2")) == doctest::Approx(std::numbers::e / 2.0));
  CHECK(static_cast<double>(X("-(1+2)*3")) == -9.0);
  CHECK(static_cast<double>(X("2^10")) == 1024.0);
  CHECK(static_cast<double>(X(" 1.5e2 ")) == 150.0);
  CHECK(static_cast<double>(X("sqrt(2)^2 - 2")) == doctest::Approx(0.0).epsilon(1e-30));
  // Extended precision survives the parse.
  const Extended r = X("sqrt(2)");
  CHECK(abs(r * r - 2) < Extended(1e-32));
  CHECK_THROWS_AS(X("sqrt(2"), DomainError);
  CHECK_THROWS_AS(X("foo"), DomainError);
  CHECK_THROWS_AS(X(""), DomainError);
  CHECK_THROWS_AS(X("1/0"), DomainError);
}

TEST_CASE("height grid") {
  CHECK(height_grid(1) == std::vector<std::int64_t>{1});
  CHECK(height_grid(10) == std::vector<std::int64_t>{1, 2, 4, 8, 10});
  CHECK(height_grid(8) == std::vector<std::int64_t>{1, 2, 4, 8});
  CHECK(height_grid(1000).back() == 1000);
}

TEST_CASE("sqrt(2) minima against exhaustive search") {
  // Frozen from tests/oracles/freeze_values.py (double loop over |a0|, |a1| <= q).
  const std::vector<std::pair<std::int64_t, double>> expect{
      {1, 0.414213562373}, {2, 0.414213562373}, {4, 0.171572875254},  {8, 0.0710678118655},
      {16, 0.0710678118655}, {32, 0.0294372515229}, {64, 0.0121933088198}, {128, 0.00505063388335}};
  const ExponentFit f = linear_form_minimum({{X("sqrt(2)")}, 128});
  REQUIRE(f.minima.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(f.minima[i].q == expect[i].first);
    CHECK(f.minima[i].min_value == doctest::Approx(expect[i].second).epsilon(1e-10));
  }
  CHECK_FALSE(f.relation.has_value());
}

TEST_CASE("minima are nonincreasing and the exponent is near 1 for sqrt(2)") {
  const ExponentFit f = linear_form_minimum({{X("sqrt(2)")}, 1000});
  for (std::size_t i = 1; i < f.minima.size(); ++i)
    CHECK(f.minima[i].min_value <= f.minima[i - 1].min_value);
  CHECK(f.fitted_exponent > 0.8);
  CHECK(f.fitted_exponent < 1.2);
  CHECK(f.fit_residual >= 0.0);
}

TEST_CASE("generic pair follows the Dirichlet exponent") {
  const ExponentFit f = linear_form_minimum({{X("pi-3"), X("e/2")}, 1000});
  MESSAGE("fitted exponent " << f.fitted_exponent);
  CHECK(f.fitted_exponent > 1.5);
  CHECK(f.fitted_exponent < 2.6);
}

TEST_CASE("relations for rational and dependent inputs") {
  const ExponentFit r = linear_form_minimum({{X("1/3")}, 100});
  REQUIRE(r.relation.has_value());
  CHECK(r.relation->coefficients == std::vector<std::int64_t>{-1, 3});
  CHECK(r.relation->height == 3);
  CHECK(std::isnan(r.fitted_exponent));

  const ExponentFit d = linear_form_minimum({{X("sqrt(2)"), X("2*sqrt(2)+1")}, 100});
  REQUIRE(d.relation.has_value());
  // a0 + a1 sqrt2 + a2 (2 sqrt2 + 1) = 0
  const auto& c = d.relation->coefficients;
  CHECK(c[0] + c[2] == 0);
  CHECK(c[1] + 2 * c[2] == 0);
  CHECK(c[1] > 0);
}

TEST_CASE("polynomial minimum") {
  const ExponentFit p = polynomial_minimum(X("sqrt(2)"), X("sqrt(3)"), 2, 3);
  REQUIRE(p.relation.has_value());
  // a0, x, y, x^2, xy, y^2
  CHECK(p.relation->coefficients == std::vector<std::int64_t>{1, 0, 0, 1, 0, -1});

  // Degree 1 is the linear form on (x, y).
  const ExponentFit a = polynomial_minimum(X("pi-3"), X("e/2"), 1, 64);
  const ExponentFit b = linear_form_minimum({{X("pi-3"), X("e/2")}, 64});
  REQUIRE(a.minima.size() == b.minima.size());
  for (std::size_t i = 0; i < a.minima.size(); ++i)
    CHECK(a.minima[i].min_value == b.minima[i].min_value);

  CHECK_FALSE(polynomial_minimum(X("pi-3"), X("e/2"), 2, 4).relation.has_value());
  CHECK_THROWS_AS(polynomial_minimum(X("1"), X("2"), 4, 2), DomainError);
  CHECK_THROWS_AS(polynomial_minimum(X("pi"), X("e"), 3, 50, 1000), BudgetError);
}

TEST_CASE("query limits") {
  CHECK_THROWS_AS(linear_form_minimum({{}, 10}), DomainError);
  CHECK_THROWS_AS(linear_form_minimum({{X("1"), X("2"), X("3"), X("4")}, 10}), DomainError);
  CHECK_THROWS_AS(linear_form_minimum({{X("0"), X("0")}, 10}), DomainError);
  CHECK_THROWS_AS(linear_form_minimum({{X("pi"), X("e"), X("sqrt(2)")}, 101}), BudgetError);
  CHECK_THROWS_AS(linear_form_minimum({{X("pi")}, 1001}), BudgetError);
  CHECK_THROWS_AS(linear_form_minimum({{X("pi")}, 0}), DomainError);
  CHECK_THROWS_AS(minimize_linear_form({X("pi"), X("e")}, 1000, 1000), BudgetError);
}

TEST_CASE("sqrt sum gaps on Z^2") {
  const LatticeSpec z2(0.0, 1.0);
  const SqrtSumGap p = sqrt_sum_gap(z2, 50.0, 2);
  CHECK(p.value == doctest::Approx(0.0990195135927848).epsilon(1e-12));
  const SqrtSumGap a = sqrt_sum_gap(z2, 50.0, 2, DualFilter::all);
  CHECK(a.value == doctest::Approx(0.0710678118654752).epsilon(1e-12));
  CHECK(a.empirical_K == doctest::Approx(std::log(1.0 / a.value) / std::log(50.0)));
  REQUIRE(a.terms.size() == 2);
  REQUIRE(a.signs.size() == 2);
  double s = 0.0;
  for (std::size_t j = 0; j < 2; ++j) s += a.signs[j] * std::sqrt(a.terms[j]);
  CHECK(std::abs(s) == doctest::Approx(a.value));
  CHECK(a.signs[0] == 1);
  CHECK_FALSE(a.nonsymbolic_zero);
}

TEST_CASE("sqrt sum gap finds nonsymbolic zeros") {
  // sqrt(8) - sqrt(2) - sqrt(2) = 0 without term-by-term cancellation.
  const SqrtSumGap g = sqrt_sum_gap_of({Extended(2), Extended(8)}, 3, 8.0);
  CHECK(g.nonsymbolic_zero);
  CHECK(g.value < 1e-30);
  // Symbolic cancellation alone never counts.
  const SqrtSumGap h = sqrt_sum_gap_of({Extended(2), Extended(3)}, 2, 3.0);
  CHECK_FALSE(h.nonsymbolic_zero);
  CHECK(h.value > 0.1);
}

TEST_CASE("sqrt sum gap terms are dual norms") {
  const LatticeSpec g = LatticeSpec::default_generic();
  const SqrtSumGap r = sqrt_sum_gap(g, 30.0, 3);
  CHECK(r.value > 0.0);
  for (const double z : r.terms) {
    bool found = false;
    for (int a = 0; a <= 10 && !found; ++a)
      for (int b = 0; b <= 10 && !found; ++b)
        found = std::abs(dual_squared_norm(g, {a, b}) - z) < 1e-9 * z;
    CHECK(found);
  }
  CHECK_THROWS_AS(sqrt_sum_gap(g, 30.0, 5), DomainError);
}
