#pragma once

#include <catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace sqz::testing {

inline constexpr std::uint64_t kSeed = 20260101;
inline constexpr double kPi = 3.14159265358979323846;

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
  return v;
}

inline double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

inline Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
  return a + a.adjoint();
}

// Random density matrix: G G^dag normalized.
inline Eigen::MatrixXcd random_density(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace();
}

}  // namespace sqz::testing
