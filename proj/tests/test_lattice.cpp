#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "thinannuli/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace thinannuli;

namespace {
const LatticeSpec kZ2(0.0, 1.0);
}

TEST_CASE("lattice spec invariants") {
  const LatticeSpec g = LatticeSpec::default_generic();
  CHECK(g.determinant() == g.beta());
  CHECK(g.xi() == doctest::Approx(-(std::numbers::pi - 3.0) / (std::numbers::e / 2.0)));
  CHECK(g.eta() == doctest::Approx(2.0 / std::numbers::e));
  CHECK(kZ2.dual() == kZ2);
  CHECK_THROWS_AS(LatticeSpec(0.3, 0.0), DomainError);
  CHECK_THROWS_AS(LatticeSpec(0.3, -1.0), DomainError);
  CHECK_THROWS_AS(LatticeSpec(NAN, 1.0), DomainError);
}

TEST_CASE("squared_norm") {
  CHECK(squared_norm(kZ2, {3, 4}) == 25.0);
  CHECK(squared_norm(LatticeSpec::default_generic(), {0, 0}) == 0.0);
  CHECK(squared_norm(LatticeSpec(0.5, 1.0), {1, 2}) == 8.0);

  const LatticeSpec g = LatticeSpec::default_generic();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> c(-50, 50);
  for (int i = 0; i < 500; ++i) {
    const LatticePoint p{c(rng), c(rng)};
    const double q = squared_norm(g, p);
    CHECK(q >= 0.0);
    CHECK((q == 0.0) == (p.m == 0 && p.n == 0));
    CHECK(q == doctest::Approx(static_cast<double>(squared_norm_extended(g, p))).epsilon(1e-14));
  }
}

TEST_CASE("dual norm matches the dual lattice's primal norm") {
  const LatticeSpec g = LatticeSpec::default_generic();
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b)
      CHECK(dual_squared_norm(g, {a, b}) ==
            doctest::Approx(squared_norm(g.dual(), {a, b})).epsilon(1e-13));
}

TEST_CASE("count_disc small values") {
  CHECK(count_disc(kZ2, 0.0) == 1);
  CHECK(count_disc(kZ2, 1.0) == 5);
  CHECK(count_disc(kZ2, 2.0) == 13);
  CHECK(count_disc(kZ2, 3.0) == 29);
  CHECK(count_disc(kZ2, 5.0) == oracle::count_disc(kZ2, 5.0));
  CHECK_THROWS_AS(count_disc(kZ2, -1.0), DomainError);
}

TEST_CASE("count_disc on the generic lattice near t = 50") {
  const LatticeSpec g = LatticeSpec::default_generic();
  const std::int64_t n = count_disc(g, 50.0);
  CHECK(n == 5785);  // frozen from tests/oracles/freeze_values.py
  CHECK(n == oracle::count_disc(g, 50.0));
  CHECK(std::abs(n - std::numbers::pi * 2500.0 / g.beta()) < 5.0 * std::sqrt(50.0));
}

TEST_CASE("exactness against brute force on random lattices") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(0.0, 1.0), ub(0.5, 2.0), ut(1.0, 120.0);
  for (int i = 0; i < 60; ++i) {
    const LatticeSpec lat(ua(rng), ub(rng));
    const double t = ut(rng);
    CHECK(count_disc(lat, t) == oracle::count_disc(lat, t));
  }
}

TEST_CASE("boundary points on integer lattices are included") {
  // Radius hits lattice points exactly: 5^2 = 3^2 + 4^2 = 0^2 + 5^2.
  CHECK(count_disc(kZ2, 5.0) == oracle::count_disc(kZ2, 5.0));
  CHECK(count_disc(kZ2, std::sqrt(50.0)) == oracle::count_disc(kZ2, std::sqrt(50.0)));
  const LatticeSpec half(0.5, 0.5);
  for (double t : {1.0, 2.0, 2.5, 5.0, 10.0})
    CHECK(count_disc(half, t) == oracle::count_disc(half, t));
}

TEST_CASE("count_annulus") {
  CHECK(count_annulus(kZ2, {1.0, 1.0}) == 8);
  CHECK(count_annulus(kZ2, {2.0, 1.0}) == 16);
  CHECK(count_annulus(kZ2, {1.1, 0.2}) == 0);

  const LatticeSpec g = LatticeSpec::default_generic();
  const AnnulusQuery q{100.0, 0.5};
  CHECK(count_annulus(g, q) == oracle::count_disc(g, 100.5) - oracle::count_disc(g, 100.0));
  CHECK_THROWS_AS(count_annulus(g, {1.0, 0.0}), DomainError);
}

TEST_CASE("additivity and monotonicity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(0.0, 1.0), ub(0.5, 2.0), ut(0.5, 400.0), ur(0.01, 3.0);
  for (int i = 0; i < 100; ++i) {
    const LatticeSpec lat(ua(rng), ub(rng));
    const double t = ut(rng), rho = ur(rng);
    const auto inner = count_disc(lat, t);
    const auto outer = count_disc(lat, t + rho);
    CHECK(count_annulus(lat, {t, rho}) == outer - inner);
    CHECK(inner <= outer);
  }
}

TEST_CASE("sharp statistic and disc error") {
  CHECK(sharp_statistic(kZ2, {1.0, 1.0}) == doctest::Approx(8.0 - 3.0 * std::numbers::pi));
  CHECK(sharp_statistic(kZ2, {2.0, 1.0}) == doctest::Approx(0.206501153589));
  CHECK(disc_error(kZ2, 1.0) == doctest::Approx(1.85840734641));
  CHECK(disc_error(kZ2, 2.0) == doctest::Approx(0.433629385641));
  CHECK(disc_error(kZ2, 0.0) == 1.0);
  CHECK(normalized_disc_error(kZ2, 4.0) == doctest::Approx(disc_error(kZ2, 4.0) / 2.0));
  CHECK_THROWS_AS(sharp_statistic(kZ2, {0.0, 1.0}), DomainError);
}

TEST_CASE("leading term stays within sqrt(t) scale") {
  const LatticeSpec g = LatticeSpec::default_generic();
  double worst = 0.0;
  for (double lt = 2.0; lt <= 4.0; lt += 0.125) {
    const double t = std::pow(10.0, lt);
    worst = std::max(worst, std::abs(normalized_disc_error(g, t)));
  }
  MESSAGE("max |Delta(t)|/sqrt(t) over t in [1e2, 1e4]: " << worst);
  CHECK(worst < 10.0);
}

TEST_CASE("enumerate_norms") {
  const auto z = enumerate_norms(kZ2, 2.0, false);
  REQUIRE(z.size() == 3);
  CHECK(z[0].squared_norm == 0.0);
  CHECK(z[0].multiplicity == 1);
  CHECK(z[1].squared_norm == 1.0);
  CHECK(z[1].multiplicity == 4);
  CHECK(z[2].squared_norm == 2.0);
  CHECK(z[2].multiplicity == 4);

  const auto d = enumerate_norms(kZ2, 30.0, true);
  const auto p = enumerate_norms(kZ2, 30.0, false);
  REQUIRE(d.size() == p.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(d[i].squared_norm == p[i].squared_norm);
    CHECK(d[i].multiplicity == p[i].multiplicity);
  }
  CHECK_THROWS_AS(enumerate_norms(kZ2, 1e6, false, 1000), BudgetError);
}

TEST_CASE("merge_norms is order independent") {
  std::vector<double> v{5.0, 1.0, 2.0, 1.0 + 1e-12, 5.0, 3.0};
  const auto a = merge_norms(v);
  std::reverse(v.begin(), v.end());
  const auto b = merge_norms(v);
  REQUIRE(a.size() == b.size());
  CHECK(a.size() == 4);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].multiplicity == b[i].multiplicity);
}

TEST_CASE("no nontrivial multiplicities on a generic lattice") {
  const LatticeSpec g = LatticeSpec::default_generic();
  const auto shells = enumerate_norms(g, 2000.0, false);
  CHECK(shells.front().multiplicity == 1);
  for (std::size_t i = 1; i < shells.size(); ++i) CHECK(shells[i].multiplicity == 2);

  // Equal norms only for p = +-q.
  auto pts = enumerate_points(g, 2000.0);
  std::sort(pts.begin(), pts.end(), [&](LatticePoint a, LatticePoint b) {
    return squared_norm(g, a) < squared_norm(g, b);
  });
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!norms_coincide(squared_norm(g, pts[i - 1]), squared_norm(g, pts[i]))) continue;
    const bool same = pts[i - 1] == pts[i];
    const bool opposite = pts[i - 1].m == -pts[i].m && pts[i - 1].n == -pts[i].n;
    CHECK((same || opposite));
  }
}

TEST_CASE("point set symmetry") {
  const LatticeSpec lat(0.37, 1.3);
  const auto pts = enumerate_points(lat, 500.0);
  std::vector<std::pair<std::int64_t, std::int64_t>> a, b;
  for (const auto& p : pts) {
    a.emplace_back(p.m, p.n);
    b.emplace_back(-p.m, -p.n);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  for (const auto& s : enumerate_norms(lat, 500.0, false))
    if (s.squared_norm > 0.0) CHECK(s.multiplicity % 2 == 0);
}

TEST_CASE("norm_gap") {
  const NormGap z = norm_gap(kZ2, 25.3, 5.0);
  CHECK(z.nearest == 25.0);
  CHECK(z.gap == 1.0);

  CHECK(norm_gap(kZ2, 25.5, 5.0).nearest == 25.0);

  // Sort-and-scan oracle on the generic lattice.
  const LatticeSpec g = LatticeSpec::default_generic();
  const NormGap r = norm_gap(g, 100.0, 10.0);
  auto pts = oracle::points_within(g, 110.0L);
  std::vector<long double> q;
  for (const auto& p : pts) q.push_back(p.q);
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end(),
                      [](long double a, long double b) { return std::fabs(a - b) < 1e-9L * b; }),
          q.end());
  std::size_t k = 0;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (std::fabs(q[i] - 100.0L) < std::fabs(q[k] - 100.0L)) k = i;
  const long double expect = std::min(q[k] - q[k - 1], q[k + 1] - q[k]);
  CHECK(r.gap > 0.0);
  CHECK(r.nearest == doctest::Approx(static_cast<double>(q[k])));
  CHECK(r.gap == doctest::Approx(static_cast<double>(expect)).epsilon(1e-9));

  CHECK_THROWS_AS(norm_gap(kZ2, 3.5, 0.1), InconclusiveError);
  CHECK_THROWS_AS(norm_gap(kZ2, 0.0, 1.0), DomainError);
}

TEST_CASE("dual spectrum pairs integrally with the lattice") {
  // Brute force: the dual is {y : <y, 1> and <y, tau> in Z}, i.e. y = (a, (b - a alpha)/beta).
  const LatticeSpec g = LatticeSpec::default_generic();
  const double bound = 40.0;
  std::vector<double> z;
  for (int a = -60; a <= 60; ++a)
    for (int b = -60; b <= 60; ++b) {
      const double y1 = a, y2 = (b - a * g.alpha()) / g.beta();
      const double q = y1 * y1 + y2 * y2;
      if (q <= bound) z.push_back(q);
    }
  const auto expect = merge_norms(z);
  const auto got = enumerate_norms(g, bound, true);
  REQUIRE(got.size() == expect.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].squared_norm == doctest::Approx(expect[i].squared_norm).epsilon(1e-12));
    CHECK(got[i].multiplicity == expect[i].multiplicity);
  }
}
