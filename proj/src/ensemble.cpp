#include "thinannuli/ensemble.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace thinannuli {

namespace {

constexpr double kPi = std::numbers::pi;

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double RhoRule::rho(double T) const {
  if (fixed) return *fixed;
  return std::pow(T, -exponent);
}

void EnsembleConfig::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("ensemble requires T > 0");
  if (samples < 1) throw DomainError("ensemble requires at least one sample");
  if (moment_cap < 1) throw DomainError("moment cap must be >= 1");
  if (rho_rule.fixed && !(*rho_rule.fixed > 0.0)) throw DomainError("rho must be > 0");
  if (!rho_rule.fixed && !(rho_rule.exponent > 0.0)) throw DomainError("rho exponent must be > 0");
}

double OmegaDensity::pdf(double u) {
  if (u < lower || u > upper) return 0.0;
  const boost::math::normal_distribution<double> n(center, scale);
  const double mass = boost::math::cdf(n, upper) - boost::math::cdf(n, lower);
  return boost::math::pdf(n, u) / mass;
}

double OmegaDensity::quantile(double p) {
  const boost::math::normal_distribution<double> n(center, scale);
  const double a = boost::math::cdf(n, lower);
  const double b = boost::math::cdf(n, upper);
  const double q = std::clamp(a + p * (b - a), a, b);
  if (q <= 0.0) return lower;
  if (q >= 1.0) return upper;
  return std::clamp(boost::math::quantile(n, q), lower, upper);
}

std::vector<WeightedSample> sample_points(const EnsembleConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  const double w = 1.0 / static_cast<double>(cfg.samples);
  std::vector<WeightedSample> out;
  out.reserve(static_cast<std::size_t>(cfg.samples));
  for (std::int64_t i = 0; i < cfg.samples; ++i) {
    const double u = unit_uniform(rng);
    const double t = cfg.weight == Weighting::uniform ? cfg.T * (1.0 + u)
                                                      : cfg.T * OmegaDensity::quantile(u);
    out.push_back({t, w});
  }
  return out;
}

double predicted_sigma_squared(const LatticeSpec& lattice, double rho) {
  if (!(rho > 0.0)) throw DomainError("rho must be > 0");
  return 4.0 * kPi * rho / lattice.beta();
}

double spectral_sigma_squared(const DualSpectrum& spectrum, double L) {
  if (!(L > 0.0)) throw DomainError("smoothing requires L > 0");
  CompensatedSum sum;
  for (const auto& s : spectrum.shells()) {
    const double sn = std::sin(kPi * s.radius / L);
    sum.add(s.multiplicity * sn * sn * s.weight * s.weight / (s.radius * s.radius * s.radius));
  }
  const double beta = spectrum.lattice().beta();
  return 4.0 / (beta * beta * kPi * kPi) * sum.value();
}

double spectral_sigma_squared(const LatticeSpec& lattice, const SmoothingParams& sp) {
  sp.validate();
  return spectral_sigma_squared(DualSpectrum(lattice, sp.M, sp.kernel), sp.L);
}

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double gaussian_moment(int m) {
  if (m < 0) throw DomainError("moment order must be >= 0");
  if (m % 2 != 0) return 0.0;
  // (m-1)!! = m! / (2^{m/2} (m/2)!)
  double v = 1.0;
  for (int k = m - 1; k > 1; k -= 2) v *= k;
  return v;
}

SampleSeries evaluate_series(const Statistic& statistic, const std::vector<WeightedSample>& samples,
                             unsigned threads) {
  const std::size_t n = samples.size();
  SampleSeries series;
  series.t.resize(n);
  series.value.resize(n);
  series.weight.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    series.t[i] = samples[i].t;
    series.weight[i] = samples[i].weight;
  }
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) series.value[i] = statistic(samples[i].t);
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    work(0, n);
    return series;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(n, w * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return series;
}

MomentReport summarize(const SampleSeries& series, double sigma, int moment_cap) {
  const std::size_t n = series.value.size();
  if (n < 2) throw DomainError("moment report requires at least 2 samples");
  if (!(sigma > 0.0)) throw DomainError("moment report requires sigma > 0");

  CompensatedSum wsum, mean_sum;
  for (std::size_t i = 0; i < n; ++i) {
    wsum.add(series.weight[i]);
    mean_sum.add(series.weight[i] * series.value[i]);
  }
  const double total = wsum.value();
  MomentReport r;
  r.mean = mean_sum.value() / total;

  CompensatedSum var_sum;
  std::vector<CompensatedSum> raw(static_cast<std::size_t>(moment_cap));
  for (std::size_t i = 0; i < n; ++i) {
    const double d = series.value[i] - r.mean;
    var_sum.add(series.weight[i] * d * d);
    const double z = series.value[i] / sigma;
    double p = 1.0;
    for (int m = 1; m <= moment_cap; ++m) {
      p *= z;
      raw[static_cast<std::size_t>(m - 1)].add(series.weight[i] * p);
    }
  }
  r.variance = std::max(0.0, var_sum.value() / total);
  for (int m = 1; m <= moment_cap; ++m)
    r.normalized_moments.emplace_back(m, raw[static_cast<std::size_t>(m - 1)].value() / total);

  // Weighted KS distance against the standard normal.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return series.value[a] < series.value[b]; });
  double below = 0.0;
  double ks = 0.0;
  for (std::size_t j = 0; j < n;) {
    // Equal values form a single jump of the empirical CDF.
    std::size_t k = j;
    double jump = 0.0;
    while (k < n && series.value[order[k]] == series.value[order[j]]) jump += series.weight[order[k++]];
    const double phi = gaussian_cdf(series.value[order[j]] / sigma);
    const double above = below + jump / total;
    ks = std::max({ks, std::abs(phi - below), std::abs(above - phi)});
    below = above;
    j = k;
  }
  r.ks_distance = ks;
  return r;
}

MomentReport moment_report(const Statistic& statistic, const EnsembleConfig& cfg, double sigma,
                           SampleSeries* series_out) {
  cfg.validate();
  if (cfg.samples < 2) throw DomainError("moment report requires at least 2 samples");
  if (!(sigma > 0.0)) throw DomainError("moment report requires sigma > 0");
  auto series = evaluate_series(statistic, sample_points(cfg), cfg.threads);
  MomentReport r = summarize(series, sigma, cfg.moment_cap);
  r.sigma_squared_predicted = sigma * sigma;
  if (series_out) *series_out = std::move(series);
  return r;
}

double mean_decay_check(const Statistic& statistic, const EnsembleConfig& cfg) {
  if (cfg.weight != Weighting::smooth_omega)
    throw DomainError("mean decay check requires smooth_omega weighting");
  const auto series = evaluate_series(statistic, sample_points(cfg), cfg.threads);
  CompensatedSum s, w;
  for (std::size_t i = 0; i < series.value.size(); ++i) {
    s.add(series.weight[i] * series.value[i]);
    w.add(series.weight[i]);
  }
  return std::abs(s.value() / w.value());
}

double mean_decay_check(const LatticeSpec& lattice, const SmoothingParams& sp,
                        const EnsembleConfig& cfg) {
  const SmoothStatistic smooth(lattice, sp);
  return mean_decay_check([&](double t) { return smooth(t); }, cfg);
}

double sharp_smooth_difference_moment(const Statistic& sharp, const Statistic& smooth,
                                      const EnsembleConfig& cfg) {
  const auto samples = sample_points(cfg);
  const auto a = evaluate_series(sharp, samples, cfg.threads);
  const auto b = evaluate_series(smooth, samples, cfg.threads);
  CompensatedSum s, w;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = a.value[i] - b.value[i];
    s.add(samples[i].weight * d * d);
    w.add(samples[i].weight);
  }
  return s.value() / w.value();
}

double sharp_smooth_difference_moment(const LatticeSpec& lattice, const SmoothingParams& sp,
                                      const EnsembleConfig& cfg) {
  const SmoothStatistic smooth(lattice, sp);
  const double rho = 1.0 / sp.L;
  return sharp_smooth_difference_moment(
      [&](double t) { return sharp_statistic(lattice, {t, rho}); },
      [&](double t) { return smooth(t); }, cfg);
}

}  // namespace thinannuli
