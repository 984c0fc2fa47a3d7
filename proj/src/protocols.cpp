#include "sqz/protocols.hpp"

#include "sqz/errors.hpp"
#include "sqz/estimation.hpp"
#include "sqz/numerics/ode.hpp"
#include "sqz/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sqz {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

BlochState apply_rotation(const BlochState& s, double angle, double azimuth) {
  const Eigen::Vector3d n(std::cos(azimuth), std::sin(azimuth), 0.0);
  const Eigen::Vector3d v = s.vec();
  const double c = std::cos(angle);
  return BlochState::from(c * v + std::sin(angle) * n.cross(v) + (1.0 - c) * n.dot(v) * n);
}

double preparation_azimuth(double phi) { return kPi - phi; }

BlochState prepare(double theta, double phi) {
  return apply_rotation(BlochState::ground(), theta, preparation_azimuth(phi));
}

double measure(const BlochState& s, MeasurementBasis basis) {
  switch (basis) {
    case MeasurementBasis::X:
      return apply_rotation(s, kPi / 2, -kPi / 2).sz;
    case MeasurementBasis::Y:
      return apply_rotation(s, kPi / 2, 0.0).sz;
    case MeasurementBasis::Z:
      break;
  }
  return s.sz;
}

void PulseSequence::validate() const {
  for (std::size_t k = 0; k < pulses.size(); ++k) {
    const Pulse& p = pulses[k];
    if (!(p.angle > 0 && p.angle <= 2 * kPi))
      throw InvalidInput("PulseSequence: pulse " + std::to_string(k) + " angle outside (0, 2 pi]");
    if (!std::isfinite(p.azimuth) || !(p.time >= 0))
      throw InvalidInput("PulseSequence: pulse " + std::to_string(k) + " has invalid azimuth or time");
    if (k > 0 && p.time < pulses[k - 1].time)
      throw InvalidInput("PulseSequence: pulse times must be nondecreasing");
  }
  if (!(squeezing_on >= 0) || !(squeezing_off >= squeezing_on))
    throw InvalidInput("PulseSequence: squeezing window must satisfy 0 <= on <= off");
  if (measure_time && !pulses.empty() && *measure_time < pulses.back().time)
    throw InvalidInput("PulseSequence: measurement precedes the last pulse");
}

BlochState final_state(const PulseSequence& seq, const DecayRates& squeezed) {
  seq.validate();
  const DecayRates vacuum = squeezed.vacuum();
  // Free evolution from a to b, split at the squeezing window edges.
  const auto evolve_span = [&](BlochState s, double a, double b) {
    const double cuts[] = {a, std::clamp(seq.squeezing_on, a, b), std::clamp(seq.squeezing_off, a, b), b};
    for (int k = 0; k < 3; ++k) {
      const double lo = cuts[k], hi = cuts[k + 1];
      if (hi <= lo) continue;
      const bool on = lo >= seq.squeezing_on && hi <= seq.squeezing_off;
      s = on ? evolve(s, squeezed, hi - lo, lo - seq.squeezing_on) : evolve(s, vacuum, hi - lo);
    }
    return s;
  };

  BlochState s = BlochState::ground();
  double t = 0.0;
  for (const Pulse& p : seq.pulses) {
    s = evolve_span(s, t, p.time);
    s = apply_rotation(s, p.angle, p.azimuth);
    t = p.time;
  }
  const double t_end = seq.measure_time.value_or(t);
  return evolve_span(s, t, t_end);
}

double run_sequence(const PulseSequence& seq, const DecayRates& squeezed) {
  return measure(final_state(seq, squeezed), seq.basis);
}

std::vector<double> RamseyTrace::envelope() const {
  std::vector<double> out(sz.size());
  for (std::size_t k = 0; k < sz.size(); ++k) out[k] = std::hypot(sz[k], quadrature[k]);
  return out;
}

RamseyTrace ramsey(const DecayRates& r, double phi, double omega_mod_mhz, std::span<const double> times,
                   bool squeezing_on) {
  r.validate();
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0) || (k > 0 && !(times[k] > times[k - 1])))
      throw InvalidInput("ramsey: times must be nonnegative and strictly increasing");
  }
  const DecayRates rates = squeezing_on ? r : r.vacuum();
  const double w = 2.0 * kPi * omega_mod_mhz;

  RamseyTrace out;
  out.phi = phi;
  out.omega_mod_mhz = omega_mod_mhz;
  out.squeezing_on = squeezing_on;
  out.times.assign(times.begin(), times.end());
  out.sz.reserve(times.size());
  out.quadrature.reserve(times.size());
  for (double t : times) {
    PulseSequence seq;
    seq.squeezing_on = 0.0;
    seq.squeezing_off = t;
    seq.pulses = {{kPi / 2, preparation_azimuth(phi), 0.0}, {kPi / 2, -kPi / 2 - w * t, t}};
    out.sz.push_back(run_sequence(seq, rates));
    seq.pulses[1].azimuth -= kPi / 2;
    out.quadrature.push_back(run_sequence(seq, rates));
  }
  return out;
}

BlochTrajectory tomography_trajectory(const DecayRates& r, double theta, double phi,
                                      std::span<const double> times) {
  r.validate();
  BlochTrajectory out;
  out.theta = theta;
  out.phi = phi;
  out.times.assign(times.begin(), times.end());
  const BlochState s0 = prepare(theta, phi);
  for (double t : times) {
    if (!(t >= 0)) throw InvalidInput("tomography_trajectory: times must be >= 0");
    out.states.push_back(evolve(s0, r, t));
  }
  return out;
}

BlochTrajectory driven_trajectory(const DecayRates& r, double theta, double phi, const Eigen::Vector3d& drive,
                                  std::span<const double> times) {
  r.validate();
  if (r.delta_mhz != 0.0) throw InvalidInput("driven_trajectory: requires resonant squeezing");
  BlochTrajectory out;
  out.theta = theta;
  out.phi = phi;
  out.times.assign(times.begin(), times.end());
  if (times.empty()) return out;
  if (!(times.front() >= 0)) throw InvalidInput("driven_trajectory: times must be >= 0");
  const auto f = [&](double, const Eigen::Vector3d& s) { return bloch_rhs(BlochState::from(s), r, drive); };
  OdeOptions opts;
  opts.tol = 1e-10;
  const double t_end = std::max(times.back(), 1e-9);
  const auto traj = integrate_ode(f, prepare(theta, phi).vec(), 0.0, t_end, times, opts);
  for (const Eigen::Vector3d& s : traj.states) out.states.push_back(BlochState::from(s));
  return out;
}

std::vector<double> relaxation_trace(const DecayRates& r, std::span<const double> times) {
  r.validate();
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (!(t >= 0)) throw InvalidInput("relaxation_trace: times must be >= 0");
    out.push_back(evolve(BlochState::excited(), r, t).sz);
  }
  return out;
}

std::vector<double> FitWindow::samples() const {
  if (points < 2 || !(t_max > t_min) || !(t_min >= 0))
    throw InvalidInput("FitWindow: need at least 2 points and 0 <= t_min < t_max");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) out[static_cast<std::size_t>(k)] = t_min + (t_max - t_min) * k / (points - 1);
  return out;
}

std::vector<DetuningPoint> detuning_sweep(const DecayRates& r_base, std::span<const double> deltas_mhz,
                                          double phi, const FitWindow& window, double omega_mod_mhz) {
  r_base.validate();
  const std::vector<double> times = window.samples();
  std::vector<DetuningPoint> out;
  out.reserve(deltas_mhz.size());
  for (double delta : deltas_mhz) {
    DetuningPoint pt;
    pt.delta_mhz = delta;
    try {
      const DecayRates r = r_base.with_detuning(delta);
      const auto [fast, slow] = decay_eigenrates(r);
      pt.fast_eigen_time = 1.0 / fast.real();
      pt.slow_eigen_time = 1.0 / slow.real();
      const std::vector<double> env = ramsey(r, phi, omega_mod_mhz, times).envelope();
      const ExpFit fit = fit_exp(times, env, false);
      if (fit.no_decay) throw DegenerateFit("detuning_sweep: envelope does not decay");
      pt.t_eff = fit.tau;
      pt.t_eff_err = fit.tau_err;
      pt.ok = true;
    } catch (const Error& e) {
      pt.error = e.what();
    }
    out.push_back(pt);
  }
  return out;
}

std::vector<GainRow> gain_sweep(std::span<const double> n_values, double eta, double t1, double t_phi) {
  std::vector<GainRow> out;
  out.reserve(n_values.size());
  for (double n : n_values) {
    if (!(n >= 0)) throw InvalidInput("gain_sweep: N values must be >= 0");
    if (!(eta > 0 && eta <= 1)) throw InvalidInput("gain_sweep: eta must lie in (0, 1]");
    const double m = n + eta_curve(n, eta);
    const AxisTimescales ts = axis_timescales(DecayRates::from_times(t1, t_phi, n, m));
    out.push_back({n, m, ts.tx, ts.ty, ts.tz, ts.tx_tilde, ts.ty_tilde, m - n});
  }
  return out;
}

}  // namespace sqz
