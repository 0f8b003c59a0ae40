#include "thinannuli/smooth.hpp"

#include <cmath>
#include <numbers>

namespace thinannuli {

namespace {
constexpr double kPi = std::numbers::pi;
}

KernelSpec default_kernel() {
  return {"bump", [](double x) {
            const double x2 = x * x;
            if (!(x2 < 1.0)) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - x2));
          }};
}

void SmoothingParams::validate() const {
  if (!(M > 0.0) || !std::isfinite(M)) throw DomainError("smoothing requires M > 0");
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("smoothing requires L > 0");
  if (!kernel.psi_hat) throw DomainError("smoothing kernel is empty");
}

bool SmoothingParams::regime_warning() const { return L < 2.0 || L / std::sqrt(M) > 0.5; }

DualSpectrum::DualSpectrum(const LatticeSpec& lattice, double M, const KernelSpec& kernel,
                           std::int64_t budget)
    : lattice_(lattice), M_(M) {
  if (!(M > 0.0)) throw DomainError("smoothing requires M > 0");
  build(enumerate_norms(lattice, M, true, budget), kernel);
}

DualSpectrum::DualSpectrum(const LatticeSpec& lattice, std::vector<double> dual_squared_norms,
                           double M, const KernelSpec& kernel)
    : lattice_(lattice), M_(M) {
  if (!(M > 0.0)) throw DomainError("smoothing requires M > 0");
  build(merge_norms(std::move(dual_squared_norms)), kernel);
}

void DualSpectrum::build(std::vector<NormShell> norms, const KernelSpec& kernel) {
  const double root_m = std::sqrt(M_);
  shells_.clear();
  for (const auto& s : norms) {
    if (s.squared_norm <= 0.0 || norms_coincide(s.squared_norm, 0.0) || s.squared_norm >= M_)
      continue;
    const double r = std::sqrt(s.squared_norm);
    const double w = kernel(r / root_m);
    if (w == 0.0) continue;
    shells_.push_back({r, static_cast<double>(s.multiplicity), w});
  }
}

double smooth_disc_count(const DualSpectrum& spectrum, double t) {
  if (!(t > 0.0)) throw DomainError("smooth count requires t > 0");
  CompensatedSum sum;
  for (const auto& s : spectrum.shells())
    sum.add(s.multiplicity * s.weight * std::cos(2.0 * kPi * t * s.radius + kPi / 4.0) /
            std::pow(s.radius, 1.5));
  const double beta = spectrum.lattice().beta();
  return kPi * t * t / beta - std::sqrt(t) / (beta * kPi) * sum.value();
}

double smooth_disc_count(const LatticeSpec& lattice, double t, const SmoothingParams& sp) {
  sp.validate();
  return smooth_disc_count(DualSpectrum(lattice, sp.M, sp.kernel), t);
}

double smooth_statistic(const DualSpectrum& spectrum, double L, double t) {
  return SmoothStatistic(spectrum, L)(t);
}

double smooth_statistic(const LatticeSpec& lattice, double t, const SmoothingParams& sp) {
  return SmoothStatistic(lattice, sp)(t);
}

double smooth_statistic_two_call(const DualSpectrum& spectrum, double L, double t) {
  if (!(t > 0.0) || !(L > 0.0)) throw DomainError("smooth statistic requires t > 0 and L > 0");
  const double rho = 1.0 / L;
  const double beta = spectrum.lattice().beta();
  const double diff = smooth_disc_count(spectrum, t + rho) - smooth_disc_count(spectrum, t);
  return (diff - kPi / beta * (2.0 * t * rho + rho * rho)) / std::sqrt(t);
}

SmoothStatistic::SmoothStatistic(DualSpectrum spectrum, double L)
    : spectrum_(std::move(spectrum)), L_(L) {
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("smoothing requires L > 0");
  const double scale = 2.0 / (spectrum_.lattice().beta() * kPi);
  coefficients_.reserve(spectrum_.shells().size());
  for (const auto& s : spectrum_.shells())
    coefficients_.push_back(scale * s.multiplicity * s.weight * std::sin(kPi * s.radius / L) /
                            std::pow(s.radius, 1.5));
}

SmoothStatistic::SmoothStatistic(const LatticeSpec& lattice, const SmoothingParams& sp)
    : SmoothStatistic((sp.validate(), DualSpectrum(lattice, sp.M, sp.kernel)), sp.L) {}

double SmoothStatistic::operator()(double t) const {
  if (!(t > 0.0)) throw DomainError("smooth statistic requires t > 0");
  const double shifted = t + 1.0 / (2.0 * L_);
  const auto& shells = spectrum_.shells();
  CompensatedSum sum;
  for (std::size_t i = 0; i < shells.size(); ++i)
    sum.add(coefficients_[i] * std::sin(2.0 * kPi * shifted * shells[i].radius + kPi / 4.0));
  return sum.value();
}

}  // namespace thinannuli
