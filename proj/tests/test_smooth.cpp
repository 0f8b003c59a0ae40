#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "thinannuli/smooth.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace thinannuli;

namespace {
const LatticeSpec kZ2(0.0, 1.0);
}

TEST_CASE("default kernel") {
  const KernelSpec k = default_kernel();
  CHECK(k(0.0) == 1.0);
  CHECK(k(0.5) == doctest::Approx(0.716531310574));
  CHECK(k(1.0) == 0.0);
  CHECK(k(-1.2) == 0.0);
  for (double x = 0.05; x < 1.0; x += 0.05) {
    CHECK(k(x) == k(-x));
    CHECK(k(x) < k(x - 0.05));
  }
}

TEST_CASE("smoothing params") {
  CHECK_NOTHROW(SmoothingParams{1e4, 10.0}.validate());
  CHECK_THROWS_AS((SmoothingParams{0.0, 10.0}.validate()), DomainError);
  CHECK_THROWS_AS((SmoothingParams{1e4, -1.0}.validate()), DomainError);
  CHECK_FALSE(SmoothingParams{1e4, 10.0}.regime_warning());
  CHECK(SmoothingParams{1e4, 1.0}.regime_warning());
  CHECK(SmoothingParams{100.0, 10.0}.regime_warning());
}

TEST_CASE("dual spectrum on Z^2 matches r(n)") {
  const DualSpectrum ds(kZ2, 200.0, default_kernel());
  const auto r = oracle::z2_shells(199);
  REQUIRE(ds.shells().size() + 1 == r.size());
  auto it = std::next(r.begin());  // skip n = 0
  double prev = 0.0;
  for (const auto& s : ds.shells()) {
    CHECK(s.radius * s.radius == doctest::Approx(static_cast<double>(it->first)));
    CHECK(s.multiplicity == static_cast<double>(it->second));
    CHECK(s.radius > prev);
    CHECK(s.weight == doctest::Approx(std::exp(1.0 - 1.0 / (1.0 - s.radius * s.radius / 200.0))));
    prev = s.radius;
    ++it;
  }
}

TEST_CASE("explicit norm list drops zero and out-of-range entries") {
  const DualSpectrum ds(kZ2, {4.0, 0.0, 1.0, 1.0, 9.0, 16.0, 4.0}, 9.0, default_kernel());
  REQUIRE(ds.shells().size() == 2);
  CHECK(ds.shells()[0].radius == 1.0);
  CHECK(ds.shells()[0].multiplicity == 2.0);
  CHECK(ds.shells()[1].radius == 2.0);
}

TEST_CASE("smoothed statistic against direct summation") {
  // Frozen from tests/oracles/freeze_values.py.
  const SmoothingParams sp{100.0, 10.0};
  CHECK(smooth_statistic(kZ2, 100.3, sp) == doctest::Approx(-1.75138123401114).epsilon(1e-10));
  CHECK(smooth_statistic(LatticeSpec::default_generic(), 1234.5, sp) ==
        doctest::Approx(-0.0361898796183043).epsilon(1e-9));
}

TEST_CASE("precomputed and direct forms agree") {
  const LatticeSpec g = LatticeSpec::default_generic();
  const SmoothingParams sp{2000.0, 10.0};
  const DualSpectrum ds(g, sp.M, sp.kernel);
  const SmoothStatistic fast(ds, sp.L);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ut(1e3, 1e5);
  for (int i = 0; i < 50; ++i) {
    const double t = ut(rng);
    const double direct = smooth_statistic(ds, sp.L, t);
    CHECK(fast(t) == doctest::Approx(direct).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("two-call form agrees up to the O(1/sqrt t) remainder") {
  const LatticeSpec g = LatticeSpec::default_generic();
  const SmoothingParams sp{1000.0, 10.0};
  const DualSpectrum ds(g, sp.M, sp.kernel);
  for (double t : {1e4, 3e4, 1e5}) {
    const double a = smooth_statistic(ds, sp.L, t);
    const double b = smooth_statistic_two_call(ds, sp.L, t);
    CHECK(std::abs(a - b) < 20.0 / std::sqrt(t));
  }
}

TEST_CASE("smoothed count tracks the sharp count on average") {
  // Over t in [T, 2T] the mean of N~ - N is small relative to sqrt(t).
  const SmoothingParams sp{1e4, 10.0};
  const LatticeSpec g = LatticeSpec::default_generic();
  const DualSpectrum ds(g, sp.M, sp.kernel);
  double sum = 0.0;
  const int n = 400;
  for (int i = 0; i < n; ++i) {
    const double t = 1000.0 + 2.5 * i + 0.123;
    sum += (smooth_disc_count(ds, t) - static_cast<double>(count_disc(g, t))) / std::sqrt(t);
  }
  CHECK(std::abs(sum / n) < 0.1);
}

TEST_CASE("sharp and smooth statistics correlate on the generic lattice") {
  const LatticeSpec g = LatticeSpec::default_generic();
  const SmoothStatistic s(g, SmoothingParams{1e4, 10.0});
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double t = 1e4 + 31.7 * i;
    const double x = sharp_statistic(g, {t, 0.1});
    const double y = s(t);
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  const double corr = sxy / std::sqrt(sxx * syy);
  MESSAGE("correlation of S and S~: " << corr);
  CHECK(corr > 0.9);
}

TEST_CASE("budget is honoured") {
  CHECK_THROWS_AS(DualSpectrum(kZ2, 1e8, default_kernel(), 1000), BudgetError);
}
