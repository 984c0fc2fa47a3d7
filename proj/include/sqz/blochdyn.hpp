#pragma once

// Two-level atom damped by a broadband squeezed reservoir.
//
// Conventions: the ground state is sz = +1; time in us, rates in 1/us, and
// detunings in MHz (ordinary frequency). The only MHz -> rad/us conversion is
// angular_detuning(). The squeezing phase is absorbed so that the x axis is the
// slow (squeezed-noise) axis on resonance.

#include "sqz/numerics/matrix.hpp"

#include <Eigen/Dense>

#include <optional>
#include <utility>

namespace sqz {

struct BlochState {
  double sx = 0.0;
  double sy = 0.0;
  double sz = 1.0;

  Eigen::Vector3d vec() const { return {sx, sy, sz}; }
  static BlochState from(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }
  double norm_sq() const { return sx * sx + sy * sy + sz * sz; }

  static BlochState ground() { return {0.0, 0.0, 1.0}; }
  static BlochState excited() { return {0.0, 0.0, -1.0}; }
};

struct DecayRates {
  double gamma = 1.0;      // radiative rate, 1/us
  double gamma_phi = 0.0;  // pure dephasing, 1/us
  double n = 0.0;
  double m_abs = 0.0;
  double delta_mhz = 0.0;  // squeezing center minus transition frequency
  double n_floor = 0.0;    // thermal photons included in n; kept when squeezing is off

  /// Rates from measured times; t_phi <= 0 or infinite means no pure dephasing.
  static DecayRates from_times(double t1, double t_phi, double n, double m_abs, double delta_mhz = 0.0);

  double gamma_n() const { return gamma * (n + 0.5) + gamma_phi; }
  double gamma_m() const { return gamma * m_abs; }
  double angular_detuning() const;  // rad/us

  DecayRates vacuum() const { return {gamma, gamma_phi, n_floor, 0.0, delta_mhz, n_floor}; }
  DecayRates with_detuning(double d) const { return {gamma, gamma_phi, n, m_abs, d, n_floor}; }

  void validate() const;  // throws InvalidInput
};

struct AxisTimescales {
  double tx, ty, tz;          // including pure dephasing
  double tx_tilde, ty_tilde;  // radiative only
};

/// Right-hand side of the resonant Gardiner-Bloch equations, optionally with a
/// coherent drive entering as the torque omega x s (Rabi vector in rad/us).
/// Requires delta = 0.
Eigen::Vector3d bloch_rhs(const BlochState& s, const DecayRates& r,
                          const std::optional<Eigen::Vector3d>& drive = std::nullopt);

/// Qubit-frame equations for detuned squeezing, where the squeezing correlation
/// rotates as exp(-2 i (2 pi delta) t). Reduces to bloch_rhs at delta = 0.
Eigen::Vector3d detuned_bloch_rhs(const BlochState& s, const DecayRates& r, double t);

AxisTimescales axis_timescales(const DecayRates& r);

/// Gamma_N +/- sqrt(Gamma_M^2 - (2 pi delta)^2): decay rates of the transverse
/// modes (the propagator generator has eigenvalues equal to minus these).
std::pair<Complex, Complex> decay_eigenrates(const DecayRates& r);

/// Generator of the transverse dynamics acting on (sigma+~, sigma-~) in the
/// frame co-rotating with the squeezing.
Eigen::Matrix2cd polarization_generator(const DecayRates& r);

/// exp(generator * t) in closed form.
Eigen::Matrix2cd polarization_propagator(const DecayRates& r, double t);

/// Fixed point of bloch_rhs. Without drive this is (0, 0, 1/(2N+1)).
BlochState steady_state(const DecayRates& r, const std::optional<Eigen::Vector3d>& drive = std::nullopt);

/// Closed-form free evolution over `duration`, returned in the qubit frame.
/// `t_start` is the time since the squeezing was switched on; it sets the
/// orientation of the squeezing ellipse when delta != 0.
BlochState evolve(const BlochState& s0, const DecayRates& r, double duration, double t_start = 0.0);

}  // namespace sqz
