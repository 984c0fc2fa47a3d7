#pragma once

// Pulse-sequence experiments on the two-level atom: Ramsey interferometry with
// a modulated second pulse, state tomography, detuning and gain sweeps.
// Pulses are instantaneous; the squeezing is switched on and off between them.
//
// Rotation convention (right-hand rule): rotating s by angle about the unit
// equatorial axis n at azimuth a, n = (cos a, sin a, 0), gives
//   cos(angle) s + sin(angle) (n x s) + (1 - cos(angle)) (n . s) n.

#include "sqz/blochdyn.hpp"

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sqz {

BlochState apply_rotation(const BlochState& s, double angle, double azimuth);

/// |theta, phi> = (sin theta sin phi, sin theta cos phi, cos theta), reached from
/// the ground state by a rotation about -x cos(phi) + y sin(phi).
BlochState prepare(double theta, double phi);
/// Azimuth of the preparation axis -x cos(phi) + y sin(phi).
double preparation_azimuth(double phi);

enum class MeasurementBasis { Z, X, Y };

/// Expectation of the chosen component read out through a pi/2 pulse and a z
/// measurement (about -y for X, about +x for Y).
double measure(const BlochState& s, MeasurementBasis basis);

struct Pulse {
  double angle;    // rad, in (0, 2 pi]
  double azimuth;  // rad
  double time;     // us
};

struct PulseSequence {
  std::vector<Pulse> pulses;  // time-ordered
  double squeezing_on = 0.0;  // us
  double squeezing_off = std::numeric_limits<double>::infinity();
  MeasurementBasis basis = MeasurementBasis::Z;
  std::optional<double> measure_time;  // defaults to the last pulse

  void validate() const;  // throws InvalidInput
};

/// Runs the sequence from the ground state at t = 0. Free evolution uses
/// `squeezed` inside the squeezing window and its vacuum counterpart outside.
BlochState final_state(const PulseSequence& seq, const DecayRates& squeezed);
double run_sequence(const PulseSequence& seq, const DecayRates& squeezed);

struct RamseyTrace {
  double phi = 0.0;
  double omega_mod_mhz = 0.0;
  std::vector<double> times;
  std::vector<double> sz;          // second pulse about -x sin(w t) - y cos(w t)
  std::vector<double> quadrature;  // second pulse advanced by a quarter turn
  bool squeezing_on = true;

  /// sqrt(sz^2 + quadrature^2): the transverse Bloch length after demodulation.
  std::vector<double> envelope() const;
};

RamseyTrace ramsey(const DecayRates& r, double phi, double omega_mod_mhz, std::span<const double> times,
                   bool squeezing_on = true);

struct BlochTrajectory {
  double theta = 0.0;
  double phi = 0.0;
  std::vector<double> times;
  std::vector<BlochState> states;
};

BlochTrajectory tomography_trajectory(const DecayRates& r, double theta, double phi,
                                      std::span<const double> times);

/// Same as tomography_trajectory with a constant coherent drive (Rabi vector,
/// rad/us) during the evolution. Integrated numerically; requires delta = 0.
BlochTrajectory driven_trajectory(const DecayRates& r, double theta, double phi, const Eigen::Vector3d& drive,
                                  std::span<const double> times);

/// sz after a pi pulse, relaxing towards 1/(2N+1).
std::vector<double> relaxation_trace(const DecayRates& r, std::span<const double> times);

struct FitWindow {
  double t_min = 0.0;
  double t_max = 5.0;
  int points = 201;

  std::vector<double> samples() const;
};

struct DetuningPoint {
  double delta_mhz = 0.0;
  double t_eff = 0.0;  // fitted envelope decay time, us
  double t_eff_err = 0.0;
  double slow_eigen_time = 0.0;  // 1 / Re(Gamma_N - sqrt(Gamma_M^2 - w^2))
  double fast_eigen_time = 0.0;  // 1 / Re(Gamma_N + sqrt(...))
  bool ok = false;
  std::string error;
};

/// Effective decay constant at each detuning: Ramsey traces are demodulated at
/// the mod frequency and the envelope is fit with amplitude and rate only.
/// phi = pi/2 probes the x axis, phi = pi the y axis. Failed fits are reported
/// in the point and do not stop the sweep.
std::vector<DetuningPoint> detuning_sweep(const DecayRates& r_base, std::span<const double> deltas_mhz,
                                          double phi, const FitWindow& window = {},
                                          double omega_mod_mhz = 5.0);

struct GainRow {
  double n, m, tx, ty, tz, tx_tilde, ty_tilde, m_minus_n;
};

/// Timescales along an ideal source attenuated by eta.
std::vector<GainRow> gain_sweep(std::span<const double> n_values, double eta, double t1, double t_phi);

}  // namespace sqz
