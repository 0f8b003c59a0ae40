#pragma once

// Smoothed counting via truncated trigonometric sums over the dual lattice.
//
//   N~(t) = pi t^2 / beta
//           - sqrt(t)/(beta pi) * sum_k cos(2 pi t |k| + pi/4) / |k|^{3/2} * psi(|k|/sqrt M)
//
//   S~(t) = 2/(beta pi) * sum_k sin(pi |k| / L) / |k|^{3/2}
//           * sin(2 pi (t + 1/(2L)) |k| + pi/4) * psi(|k|/sqrt M)
//
// Sums run over k != 0 with |k| < sqrt(M), grouped into norm shells and
// accumulated in ascending |k| with compensated summation. The O(1/sqrt t)
// remainders of both expansions are not modelled.

#include "thinannuli/lattice.hpp"

#include <functional>
#include <string>
#include <vector>

namespace thinannuli {

// Even, supported in [-1, 1], value 1 at the origin.
struct KernelSpec {
  std::string name;
  std::function<double(double)> psi_hat;

  double operator()(double x) const { return psi_hat(x); }
};

/// exp(1 - 1/(1 - x^2)) on |x| < 1, zero elsewhere.
KernelSpec default_kernel();

struct SmoothingParams {
  double M;  // truncation scale: |k| < sqrt(M)
  double L;  // inverse annulus width
  KernelSpec kernel = default_kernel();

  void validate() const;
  /// True outside the intended regime (L large, L / sqrt(M) small).
  bool regime_warning() const;
};

// Nonzero dual norm shells below sqrt(M) with their kernel weights. Built once
// per (lattice, M, kernel) and shared read-only.
class DualSpectrum {
 public:
  DualSpectrum(const LatticeSpec& lattice, double M, const KernelSpec& kernel,
               std::int64_t budget = default_budget());
  /// From an explicit list of dual squared norms in any order (zero entries
  /// and entries at or above M are dropped).
  DualSpectrum(const LatticeSpec& lattice, std::vector<double> dual_squared_norms, double M,
               const KernelSpec& kernel);

  struct Shell {
    double radius;  // |k|
    double multiplicity;
    double weight;  // psi_hat(|k| / sqrt M)
  };

  const LatticeSpec& lattice() const { return lattice_; }
  double M() const { return M_; }
  const std::vector<Shell>& shells() const { return shells_; }

 private:
  void build(std::vector<NormShell> norms, const KernelSpec& kernel);

  LatticeSpec lattice_;
  double M_;
  std::vector<Shell> shells_;
};

double smooth_disc_count(const DualSpectrum& spectrum, double t);
double smooth_disc_count(const LatticeSpec& lattice, double t, const SmoothingParams& sp);

/// Trigonometric-sum form of S~.
double smooth_statistic(const DualSpectrum& spectrum, double L, double t);
double smooth_statistic(const LatticeSpec& lattice, double t, const SmoothingParams& sp);

/// (N~(t + 1/L) - N~(t) - (pi/beta)(2t/L + 1/L^2)) / sqrt(t)
double smooth_statistic_two_call(const DualSpectrum& spectrum, double L, double t);

// Precomputed per-shell coefficients of S~ for fixed L; evaluation is the
// hot loop of every smooth ensemble.
class SmoothStatistic {
 public:
  SmoothStatistic(DualSpectrum spectrum, double L);
  SmoothStatistic(const LatticeSpec& lattice, const SmoothingParams& sp);

  double operator()(double t) const;
  const DualSpectrum& spectrum() const { return spectrum_; }
  double L() const { return L_; }

 private:
  DualSpectrum spectrum_;
  double L_;
  std::vector<double> coefficients_;
};

}  // namespace thinannuli
