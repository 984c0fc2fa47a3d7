#pragma once

#include <Eigen/Dense>

#include <complex>

namespace sqz {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Largest absolute entry, zero for an empty matrix.
template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

/// True when |m(i,j) - conj(m(j,i))| <= rel_tol * max|m| for every entry.
template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double rel_tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  const double bound = rel_tol * static_cast<double>(max_abs(m));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - Eigen::numext::conj(m(j, i))) > bound) return false;
    }
  }
  return true;
}

}  // namespace sqz
