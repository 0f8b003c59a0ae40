#pragma once

// Ensemble averaging over t near [T, 2T]: sampling, moments, KS distance,
// and the variance and difference experiments built on them.

#include "thinannuli/lattice.hpp"
#include "thinannuli/smooth.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace thinannuli {

enum class Weighting { uniform, smooth_omega };

// Either a fixed rho or rho = T^(-exponent).
struct RhoRule {
  std::optional<double> fixed;
  double exponent = 0.1;

  double rho(double T) const;
};

struct EnsembleConfig {
  double T = 1e4;
  std::int64_t samples = 1000;
  Weighting weight = Weighting::uniform;
  std::uint64_t seed = 1;
  RhoRule rho_rule{};
  int moment_cap = 6;
  unsigned threads = 1;

  void validate() const;
};

struct WeightedSample {
  double t;
  double weight;
};

struct SampleSeries {
  std::vector<double> t;
  std::vector<double> value;
  std::vector<double> weight;
};

struct MomentReport {
  double mean = 0.0;
  double variance = 0.0;
  std::vector<std::pair<int, double>> normalized_moments;  // (m, <x^m> / sigma^m)
  double ks_distance = 0.0;
  double sigma_squared_predicted = 0.0;
};

// Truncated normal on [0.5, 2.5], centre 1.5, scale 0.25 (as a density in t/T).
struct OmegaDensity {
  static constexpr double center = 1.5;
  static constexpr double scale = 0.25;
  static constexpr double lower = 0.5;
  static constexpr double upper = 2.5;

  static double pdf(double u);
  static double quantile(double p);
};

/// Deterministic in cfg.seed (mt19937_64 with explicit bit-to-uniform map).
std::vector<WeightedSample> sample_points(const EnsembleConfig& cfg);

/// 4 pi rho / beta
double predicted_sigma_squared(const LatticeSpec& lattice, double rho);

/// 4/(beta^2 pi^2) * sum_k sin^2(pi|k|/L) / |k|^3 * psi^2(|k|/sqrt M)
double spectral_sigma_squared(const DualSpectrum& spectrum, double L);
double spectral_sigma_squared(const LatticeSpec& lattice, const SmoothingParams& sp);

/// Standard normal CDF.
double gaussian_cdf(double x);

/// m!/(2^{m/2}(m/2)!) for even m, 0 for odd m.
double gaussian_moment(int m);

using Statistic = std::function<double(double)>;

/// Evaluates `statistic` at each sample; parallel across `threads` workers
/// with results stored by sample index.
SampleSeries evaluate_series(const Statistic& statistic, const std::vector<WeightedSample>& samples,
                             unsigned threads = 1);

/// Moments and KS distance of value / sigma, reduced in sample-index order.
MomentReport summarize(const SampleSeries& series, double sigma, int moment_cap = 6);

MomentReport moment_report(const Statistic& statistic, const EnsembleConfig& cfg, double sigma,
                           SampleSeries* series_out = nullptr);

/// |<S~>| under the smooth weight; requires cfg.weight == smooth_omega.
double mean_decay_check(const Statistic& statistic, const EnsembleConfig& cfg);
double mean_decay_check(const LatticeSpec& lattice, const SmoothingParams& sp,
                        const EnsembleConfig& cfg);

/// <|S - S~|^2> over the ensemble.
double sharp_smooth_difference_moment(const Statistic& sharp, const Statistic& smooth,
                                      const EnsembleConfig& cfg);
double sharp_smooth_difference_moment(const LatticeSpec& lattice, const SmoothingParams& sp,
                                      const EnsembleConfig& cfg);

}  // namespace thinannuli
