#pragma once

// Broadband squeezed vacuum: moments, physicality, loss, and the Gaussian
// Wigner distribution in the convention where vacuum has unit variances.

#include "sqz/numerics/matrix.hpp"

#include <Eigen/Dense>

namespace sqz {

/// Squeezed reservoir described by its moments N = <a^dag a> and M = <a a>.
/// Construction validates the physicality bound |M|^2 <= N(N+1).
class SqueezedReservoir {
 public:
  SqueezedReservoir(double n, Complex m, double omega0_ghz, double bandwidth_mhz, double n_th = 0.0);

  static SqueezedReservoir vacuum(double omega0_ghz = 0.0, double bandwidth_mhz = 13.0) {
    return {0.0, Complex(0.0, 0.0), omega0_ghz, bandwidth_mhz, 0.0};
  }

  double n() const { return n_; }
  Complex m() const { return m_; }
  double m_abs() const { return std::abs(m_); }
  double omega0_ghz() const { return omega0_ghz_; }
  double bandwidth_mhz() const { return bandwidth_mhz_; }
  double n_th() const { return n_th_; }

  SqueezedReservoir with_moments(double n, Complex m) const {
    return {n, m, omega0_ghz_, bandwidth_mhz_, n_th_};
  }
  SqueezedReservoir with_center(double omega0_ghz) const {
    return {n_, m_, omega0_ghz, bandwidth_mhz_, n_th_};
  }

 private:
  double n_;
  Complex m_;
  double omega0_ghz_;
  double bandwidth_mhz_;
  double n_th_;
};

struct QuadratureVariances {
  double sigma_i_sq;
  double sigma_q_sq;
};

/// sigma_I^2 = 2(N + |M| + 1/2), sigma_Q^2 = 2(N - |M| + 1/2); squeezed axis along Q.
QuadratureVariances variances(const SqueezedReservoir& r);

/// Minimum-uncertainty squeezing moment sqrt(N(N+1)).
double ideal_M(double n);

/// Beam-splitter loss with transmission eta: N' = eta N + (1 - eta) n_env, M' = eta M.
SqueezedReservoir attenuate(const SqueezedReservoir& r, double eta, double n_env = 0.0);

/// M - N for an ideal source attenuated to the measured N: sqrt(N^2 + eta N) - N.
double eta_curve(double n_measured, double eta);

/// Thermal occupation whose equilibrium excited population is p_e.
double thermal_from_population(double p_e);

/// Equilibrium excited population of a thermal bath with occupation n_th.
double population_from_thermal(double n_th);

struct GridSpec {
  double i_min = -5.0, i_max = 5.0;
  double q_min = -5.0, q_max = 5.0;
  int i_points = 201, q_points = 201;

  /// Symmetric grid reaching n_std standard deviations along each axis.
  static GridSpec covering(const QuadratureVariances& v, double n_std, int points);
};

struct WignerGrid {
  Eigen::VectorXd i_axis;
  Eigen::VectorXd q_axis;
  Eigen::MatrixXd values;  // values(row = I index, col = Q index)

  double integral() const;  // trapezoidal rule
};

/// W(I,Q) = 2 / (pi sqrt(sI^2 sQ^2)) exp(-2 I^2 / sI^2 - 2 Q^2 / sQ^2).
double wigner_value(const QuadratureVariances& v, double i, double q);
WignerGrid wigner(const QuadratureVariances& v, const GridSpec& grid);

}  // namespace sqz
