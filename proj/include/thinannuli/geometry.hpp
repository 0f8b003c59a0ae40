#pragma once

// Low-dimensional lattice geometry: successive minima by exhaustive
// enumeration, covolumes under the stretch A_t = diag(1, ..., 1, t), and
// exact point counts in the box
//   V(delta) = [1/tau, 2 tau] x [-1, 1]^{n-2} x [0, delta * beta / 2].
//
// Everything is templated on the scalar type and works on Eigen dense
// matrices whose columns are basis vectors.

#include "thinannuli/numeric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace thinannuli {

template <class Scalar>
using Basis = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Rank-m lattice in R^n spanned by the columns of `basis` (n rows, m cols).
template <class Scalar>
class GeneralLattice {
 public:
  explicit GeneralLattice(Basis<Scalar> basis) : basis_(std::move(basis)) {
    if (basis_.rows() < 2 || basis_.rows() > 4) throw DomainError("ambient dimension must be 2..4");
    if (basis_.cols() < 1 || basis_.cols() > basis_.rows())
      throw DomainError("rank must be between 1 and the dimension");
    Scalar scale(1);
    for (Eigen::Index j = 0; j < basis_.cols(); ++j) scale *= basis_.col(j).norm();
    if (!(covolume() > Scalar(1e-12) * scale)) throw DomainError("degenerate basis");
  }

  Eigen::Index dimension() const { return basis_.rows(); }
  Eigen::Index rank() const { return basis_.cols(); }
  const Basis<Scalar>& basis() const { return basis_; }

  Scalar gram_determinant() const {
    const Scalar c = covolume();
    return c * c;
  }
  // sqrt(det Gram) as |prod R_ii| of a Householder QR; forming the Gram
  // matrix would square the condition number.
  Scalar covolume() const { return qr_covolume(basis_); }

  static Scalar qr_covolume(const Basis<Scalar>& b) {
    const Eigen::HouseholderQR<Basis<Scalar>> qr(b);
    Scalar p(1);
    for (Eigen::Index i = 0; i < b.cols(); ++i) p *= qr.matrixQR()(i, i);
    using std::abs;
    return abs(p);
  }

 private:
  Basis<Scalar> basis_;
};

template <class Scalar>
struct Minimum {
  Scalar length;
  Eigen::VectorXi coefficients;
  Vector<Scalar> vector;
};

namespace detail {

// Integer coefficient vectors x with |B x| <= radius, via bounds from the
// rows of the pseudo-inverse of B.
template <class Scalar, class Visit>
void enumerate_ball(const Basis<Scalar>& B, Scalar radius, std::int64_t budget, Visit&& visit) {
  using std::ceil;
  using std::floor;
  const Eigen::Index m = B.cols();
  const Basis<Scalar> pinv = (B.transpose() * B).inverse() * B.transpose();
  std::vector<std::int64_t> bound(static_cast<std::size_t>(m));
  double work = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto b = static_cast<std::int64_t>(floor(pinv.row(i).norm() * radius + Scalar(1e-9)));
    bound[static_cast<std::size_t>(i)] = b;
    work *= static_cast<double>(2 * b + 1);
  }
  if (work > static_cast<double>(budget))
    throw BudgetError("enumeration box too large; reduce the basis first");

  Eigen::VectorXi x(m);
  for (Eigen::Index i = 0; i < m; ++i) x[i] = static_cast<int>(-bound[static_cast<std::size_t>(i)]);
  const Scalar r2 = radius * radius;
  for (;;) {
    const Vector<Scalar> y = B * x.cast<Scalar>();
    if (y.squaredNorm() <= r2 && !x.isZero()) visit(x, y);
    Eigen::Index i = m;
    while (i > 0 && x[i - 1] == bound[static_cast<std::size_t>(i - 1)]) {
      --i;
      x[i] = static_cast<int>(-bound[static_cast<std::size_t>(i)]);
    }
    if (i == 0) break;
    ++x[i - 1];
  }
}

}  // namespace detail

/// lambda_1 <= ... <= lambda_count with realizing vectors. The search radius
/// starts at the shortest basis vector and doubles until enough independent
/// vectors are found; ties are broken by lexicographic coefficient order.
template <class Scalar>
std::vector<Minimum<Scalar>> successive_minima(const GeneralLattice<Scalar>& lat, int count,
                                               std::int64_t budget = default_budget()) {
  const Basis<Scalar>& B = lat.basis();
  if (count < 1 || count > lat.rank()) throw DomainError("count must be in 1..rank");
  Scalar shortest = B.col(0).norm();
  Scalar longest = shortest;
  for (Eigen::Index j = 1; j < B.cols(); ++j) {
    shortest = std::min(shortest, B.col(j).norm());
    longest = std::max(longest, B.col(j).norm());
  }

  for (Scalar radius = shortest;; radius *= 2) {
    const Scalar r = std::min(radius, longest) * (Scalar(1) + Scalar(1e-12));
    std::vector<Minimum<Scalar>> found;
    detail::enumerate_ball(B, r, budget, [&](const Eigen::VectorXi& x, const Vector<Scalar>& y) {
      found.push_back({y.norm(), x, y});
    });
    std::sort(found.begin(), found.end(), [](const Minimum<Scalar>& a, const Minimum<Scalar>& b) {
      if (a.length != b.length) return a.length < b.length;
      return std::lexicographical_compare(a.coefficients.data(),
                                          a.coefficients.data() + a.coefficients.size(),
                                          b.coefficients.data(),
                                          b.coefficients.data() + b.coefficients.size());
    });

    // Greedy by length; integer coefficient rank decides independence.
    std::vector<Minimum<Scalar>> chosen;
    Eigen::MatrixXd span(B.cols(), 0);
    for (const auto& cand : found) {
      Eigen::MatrixXd trial(B.cols(), span.cols() + 1);
      trial << span, cand.coefficients.template cast<double>();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(trial);
      lu.setThreshold(1e-9);
      if (lu.rank() == trial.cols()) {
        span = trial;
        chosen.push_back(cand);
        if (static_cast<int>(chosen.size()) == count) return chosen;
      }
    }
    if (radius >= longest) throw BudgetError("successive minima search did not terminate");
  }
}

template <class Scalar>
struct StretchReport {
  Scalar before;
  Scalar after;
};

/// Covolume of the lattice and of A_t applied to it (last coordinate scaled
/// by t).
template <class Scalar>
StretchReport<Scalar> stretch_determinant_check(const GeneralLattice<Scalar>& lat, Scalar t) {
  if (!(t > Scalar(0))) throw DomainError("stretch requires t > 0");
  Basis<Scalar> stretched = lat.basis();
  stretched.row(stretched.rows() - 1) *= t;
  const Scalar after = GeneralLattice<Scalar>::qr_covolume(stretched);
  if (!(after > Scalar(0))) throw DomainError("degenerate basis");
  return {lat.covolume(), after};
}

template <class Scalar>
struct BoxSpec {
  Scalar delta;
  Scalar tau;
  Scalar beta = Scalar(2);

  Scalar last_side() const { return delta * beta / Scalar(2); }
  Scalar volume(Eigen::Index n) const {
    return (Scalar(2) * tau - Scalar(1) / tau) * std::pow(Scalar(2), static_cast<int>(n - 2)) *
           last_side();
  }
};

/// Exact number of lattice points in the closed box V(delta). Full-rank
/// lattices in dimension 3 or 4 only.
template <class Scalar>
std::int64_t count_box_points(const GeneralLattice<Scalar>& lat, const BoxSpec<Scalar>& box,
                              std::int64_t budget = default_budget()) {
  using std::ceil;
  using std::floor;
  const Eigen::Index n = lat.dimension();
  if (n < 3 || lat.rank() != n) throw DomainError("box counting needs a full-rank lattice in dim 3 or 4");
  if (!(box.tau > Scalar(0)) || !(box.delta >= Scalar(0)) || !(box.beta > Scalar(0)))
    throw DomainError("box requires tau > 0, delta >= 0, beta > 0");

  Vector<Scalar> lo(n), hi(n);
  lo.setConstant(Scalar(-1));
  hi.setConstant(Scalar(1));
  lo[0] = Scalar(1) / box.tau;
  hi[0] = Scalar(2) * box.tau;
  lo[n - 1] = Scalar(0);
  hi[n - 1] = box.last_side();
  if (lo[0] > hi[0]) return 0;

  const Basis<Scalar>& B = lat.basis();
  const Basis<Scalar> inv = B.inverse();
  const Scalar slack(1e-9);
  // Coefficient ranges: x = B^{-1} y over the box.
  std::vector<std::int64_t> cmin(static_cast<std::size_t>(n)), cmax(static_cast<std::size_t>(n));
  double work = 1.0;
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    Scalar a(0), b(0);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Scalar p = inv(i, j) * lo[j], q = inv(i, j) * hi[j];
      a += std::min(p, q);
      b += std::max(p, q);
    }
    cmin[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(ceil(a - slack));
    cmax[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(floor(b + slack));
    work *= static_cast<double>(std::max<std::int64_t>(0, cmax[i] - cmin[i] + 1));
  }
  if (work > static_cast<double>(budget)) throw BudgetError("box enumeration exceeds budget");

  // Loop over the first n-1 coefficients; the last one is an interval.
  const Vector<Scalar> last = B.col(n - 1);
  std::int64_t total = 0;
  std::vector<std::int64_t> x(cmin.begin(), cmin.end() - 1);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (cmin[i] > cmax[i]) return 0;
  for (;;) {
    Vector<Scalar> y0 = Vector<Scalar>::Zero(n);
    for (Eigen::Index i = 0; i < n - 1; ++i) y0 += Scalar(x[static_cast<std::size_t>(i)]) * B.col(i);
    // lo <= y0 + k * last <= hi, componentwise.
    Scalar kmin = -std::numeric_limits<Scalar>::infinity();
    Scalar kmax = std::numeric_limits<Scalar>::infinity();
    bool feasible = true;
    for (Eigen::Index j = 0; j < n && feasible; ++j) {
      const Scalar c = last[j];
      const Scalar tol = slack * (Scalar(1) + std::abs(y0[j]));
      if (std::abs(c) < Scalar(1e-300)) {
        feasible = y0[j] >= lo[j] - tol && y0[j] <= hi[j] + tol;
        continue;
      }
      Scalar a = (lo[j] - y0[j]) / c, b = (hi[j] - y0[j]) / c;
      if (a > b) std::swap(a, b);
      const Scalar ktol = tol / std::abs(c);
      kmin = std::max(kmin, a - ktol);
      kmax = std::min(kmax, b + ktol);
    }
    if (feasible && kmin <= kmax) {
      const auto k0 = static_cast<std::int64_t>(ceil(kmin));
      const auto k1 = static_cast<std::int64_t>(floor(kmax));
      if (k1 >= k0) total += k1 - k0 + 1;
    }
    std::size_t i = x.size();
    while (i > 0 && x[i - 1] == cmax[i - 1]) {
      --i;
      x[i] = cmin[i];
    }
    if (i == 0) break;
    ++x[i - 1];
  }
  return total;
}

}  // namespace thinannuli
