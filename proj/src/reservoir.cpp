#include "sqz/reservoir.hpp"

#include "sqz/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sqz {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidInput(what);
}

Eigen::VectorXd axis(double lo, double hi, int points) {
  return Eigen::VectorXd::LinSpaced(points, lo, hi);
}

double trapezoid_weight(Eigen::Index k, Eigen::Index n) { return (k == 0 || k == n - 1) ? 0.5 : 1.0; }

}  // namespace

SqueezedReservoir::SqueezedReservoir(double n, Complex m, double omega0_ghz, double bandwidth_mhz,
                                     double n_th)
    : n_(n), m_(m), omega0_ghz_(omega0_ghz), bandwidth_mhz_(bandwidth_mhz), n_th_(n_th) {
  require(std::isfinite(n) && n >= 0, "SqueezedReservoir: N must be >= 0");
  require(std::isfinite(m.real()) && std::isfinite(m.imag()), "SqueezedReservoir: M must be finite");
  require(std::isfinite(n_th) && n_th >= 0, "SqueezedReservoir: N_th must be >= 0");
  require(std::isfinite(bandwidth_mhz) && bandwidth_mhz > 0, "SqueezedReservoir: bandwidth must be > 0");
  require(std::norm(m) <= n * (n + 1) + 1e-12,
          "SqueezedReservoir: |M|^2 = " + std::to_string(std::norm(m)) + " exceeds N(N+1) = " +
              std::to_string(n * (n + 1)));
}

QuadratureVariances variances(const SqueezedReservoir& r) {
  return {2.0 * (r.n() + r.m_abs() + 0.5), 2.0 * (r.n() - r.m_abs() + 0.5)};
}

double ideal_M(double n) {
  require(std::isfinite(n) && n >= 0, "ideal_M: N must be >= 0");
  return std::sqrt(n * (n + 1.0));
}

SqueezedReservoir attenuate(const SqueezedReservoir& r, double eta, double n_env) {
  require(eta > 0 && eta <= 1, "attenuate: eta must lie in (0, 1]");
  require(n_env >= 0, "attenuate: environment occupation must be >= 0");
  return r.with_moments(eta * r.n() + (1.0 - eta) * n_env, eta * r.m());
}

double eta_curve(double n_measured, double eta) {
  require(n_measured >= 0, "eta_curve: N must be >= 0");
  return std::sqrt(n_measured * n_measured + eta * n_measured) - n_measured;
}

double thermal_from_population(double p_e) {
  require(p_e >= 0 && p_e < 0.5, "thermal_from_population: p_e must lie in [0, 0.5)");
  return p_e / (1.0 - 2.0 * p_e);
}

double population_from_thermal(double n_th) {
  require(n_th >= 0, "population_from_thermal: N_th must be >= 0");
  return n_th / (2.0 * n_th + 1.0);
}

GridSpec GridSpec::covering(const QuadratureVariances& v, double n_std, int points) {
  // Standard deviation of I is sigma_I / 2 in this convention.
  const double si = n_std * 0.5 * std::sqrt(v.sigma_i_sq);
  const double sq = n_std * 0.5 * std::sqrt(v.sigma_q_sq);
  return {-si, si, -sq, sq, points, points};
}

double WignerGrid::integral() const {
  const Eigen::Index ni = i_axis.size();
  const Eigen::Index nq = q_axis.size();
  if (ni < 2 || nq < 2) return 0.0;
  const double di = (i_axis(ni - 1) - i_axis(0)) / static_cast<double>(ni - 1);
  const double dq = (q_axis(nq - 1) - q_axis(0)) / static_cast<double>(nq - 1);
  double sum = 0.0;
  for (Eigen::Index a = 0; a < ni; ++a)
    for (Eigen::Index b = 0; b < nq; ++b)
      sum += trapezoid_weight(a, ni) * trapezoid_weight(b, nq) * values(a, b);
  return sum * di * dq;
}

double wigner_value(const QuadratureVariances& v, double i, double q) {
  const double norm = 2.0 / (std::numbers::pi * std::sqrt(v.sigma_i_sq * v.sigma_q_sq));
  return norm * std::exp(-2.0 * i * i / v.sigma_i_sq - 2.0 * q * q / v.sigma_q_sq);
}

WignerGrid wigner(const QuadratureVariances& v, const GridSpec& grid) {
  require(v.sigma_i_sq > 0 && v.sigma_q_sq > 0, "wigner: variances must be positive");
  require(grid.i_points >= 2 && grid.q_points >= 2, "wigner: grid needs at least 2 points per axis");
  require(grid.i_max > grid.i_min && grid.q_max > grid.q_min, "wigner: grid range is empty");
  WignerGrid out;
  out.i_axis = axis(grid.i_min, grid.i_max, grid.i_points);
  out.q_axis = axis(grid.q_min, grid.q_max, grid.q_points);
  out.values.resize(grid.i_points, grid.q_points);
  for (Eigen::Index a = 0; a < out.i_axis.size(); ++a)
    for (Eigen::Index b = 0; b < out.q_axis.size(); ++b)
      out.values(a, b) = wigner_value(v, out.i_axis(a), out.q_axis(b));
  return out;
}

}  // namespace sqz
