#pragma once

// Hermitian eigensolver based on cyclic complex Jacobi rotations.
//
// Works for real symmetric and complex Hermitian matrices alike; the scalar
// type of the input decides which. Intended for the small dense problems of
// this library (dimension up to a few tens), where O(n^3) per sweep is cheap
// and Jacobi gives eigenvectors that are orthonormal to working precision.

#include "sqz/errors.hpp"
#include "sqz/numerics/matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace sqz {

template <typename Scalar>
struct EigenDecomposition {
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Eigen::Matrix<RealScalar, Eigen::Dynamic, 1> eigenvalues;  // ascending
  Matrix eigenvectors;                                       // one per column

  Matrix reconstruct() const {
    return eigenvectors * eigenvalues.template cast<Scalar>().asDiagonal() *
           eigenvectors.adjoint();
  }
};

struct JacobiOptions {
  int max_sweeps = 100;
  // Sweeps stop once the off-diagonal Frobenius norm drops below
  // off_tolerance * ||H||_F.
  double off_tolerance = 1e-14;
  // Eigenvalues closer than this (relative to max|H|) form a degenerate cluster.
  double degeneracy_tolerance = 1e-10;
};

namespace detail {

template <typename Scalar>
typename Eigen::NumTraits<Scalar>::Real off_diagonal_norm(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
  typename Eigen::NumTraits<Scalar>::Real sum = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += Eigen::numext::abs2(a(i, j));
  return std::sqrt(sum);
}

// Index of the largest-magnitude component; ties go to the lower index.
template <typename Derived>
Eigen::Index dominant_index(const Eigen::MatrixBase<Derived>& v) {
  Eigen::Index best = 0;
  double best_mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = static_cast<double>(std::abs(v(i)));
    if (mag > best_mag * (1.0 + 1e-12)) {
      best = i;
      best_mag = mag;
    }
  }
  return best;
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are returned in ascending order. Inside a degenerate cluster the
/// vectors are ordered by the index of their largest-magnitude component (ties
/// to the lower index). Every eigenvector is normalized and its phase fixed so
/// that the largest-magnitude component is real and positive.
template <typename Derived>
EigenDecomposition<typename Derived::Scalar> eigh(const Eigen::MatrixBase<Derived>& h,
                                                  const JacobiOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  if (h.rows() != h.cols())
    throw InvalidInput("eigh: matrix is " + std::to_string(h.rows()) + "x" +
                       std::to_string(h.cols()) + ", expected square");
  if (!is_hermitian(h))
    throw InvalidInput("eigh: matrix is not Hermitian to 1e-12 relative");

  const Eigen::Index n = h.rows();
  Matrix a = h;
  // Symmetrize so round-off in the input cannot leak into the rotations.
  a = (0.5 * (a + a.adjoint())).eval();
  Matrix v = Matrix::Identity(n, n);

  const Real norm = a.norm();
  const Real target = static_cast<Real>(opts.off_tolerance) * norm;
  int sweep = 0;
  while (detail::off_diagonal_norm(a) > target) {
    if (++sweep > opts.max_sweeps)
      throw ConvergenceError("eigh: no convergence after " + std::to_string(opts.max_sweeps) +
                             " Jacobi sweeps");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        const Real mag = std::abs(apq);
        if (mag == Real(0)) continue;
        // Reduce the (p,q) block to a real symmetric one via the phase of apq,
        // then apply the textbook real Jacobi rotation.
        const Scalar phase = apq / mag;
        const Real app = Eigen::numext::real(a(p, p));
        const Real aqq = Eigen::numext::real(a(q, q));
        const Real theta = (aqq - app) / (2 * mag);
        const Real t = (theta >= 0 ? Real(1) : Real(-1)) /
                       (std::abs(theta) + std::sqrt(theta * theta + 1));
        const Real c = 1 / std::sqrt(t * t + 1);
        const Real s = t * c;
        const Scalar s_phase = s * phase;                         // G(p,q)
        const Scalar s_phase_conj = s * Eigen::numext::conj(phase);  // -G(q,p)

        // a <- a * G on columns p, q.
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s_phase_conj * akq;
          a(k, q) = s_phase * akp + c * akq;
        }
        // a <- G^H * a on rows p, q.
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s_phase * aqk;
          a(q, k) = s_phase_conj * apk + c * aqk;
        }
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - s_phase_conj * vkq;
          v(k, q) = s_phase * vkp + c * vkq;
        }
      }
    }
  }

  Eigen::Matrix<Real, Eigen::Dynamic, 1> values(n);
  for (Eigen::Index i = 0; i < n; ++i) values(i) = Eigen::numext::real(a(i, i));

  // Gauge: unit norm, dominant component real positive.
  std::vector<Eigen::Index> dominant(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    v.col(k).normalize();
    const Eigen::Index d = detail::dominant_index(v.col(k));
    dominant[static_cast<std::size_t>(k)] = d;
    const Scalar lead = v(d, k);
    v.col(k) *= Eigen::numext::conj(lead) / std::abs(lead);
    v(d, k) = Scalar(std::abs(lead));
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return values(x) < values(y); });
  const Real cluster_gap =
      static_cast<Real>(opts.degeneracy_tolerance) * std::max<Real>(max_abs(h), Real(1e-300));
  for (std::size_t begin = 0; begin < order.size();) {
    std::size_t end = begin + 1;
    while (end < order.size() && values(order[end]) - values(order[end - 1]) <= cluster_gap) ++end;
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(begin),
                     order.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](Eigen::Index x, Eigen::Index y) {
                       return dominant[static_cast<std::size_t>(x)] <
                              dominant[static_cast<std::size_t>(y)];
                     });
    begin = end;
  }

  EigenDecomposition<Scalar> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = values(src);
    out.eigenvectors.col(k) = v.col(src);
  }
  return out;
}

}  // namespace sqz
