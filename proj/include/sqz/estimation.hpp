#pragma once

// Inverse problem: decay constants from traces, dephasing subtraction, the
// reservoir moments (N, M) and the loss they imply, and the Wigner
// distribution of the inferred state.

#include "sqz/numerics/least_squares.hpp"
#include "sqz/reservoir.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sqz {

struct ExpFit {
  double amplitude = 0.0;
  double tau = 0.0;  // us; infinity when no_decay
  double offset = 0.0;
  double amplitude_err = 0.0;
  double tau_err = 0.0;
  double offset_err = 0.0;
  bool no_decay = false;
  FitResult raw;  // parameters (amplitude, rate, [offset])
};

/// y = amplitude exp(-t / tau) + offset (offset fixed at 0 unless with_offset).
/// Needs at least 8 samples. A flat trace returns no_decay with tau = inf.
ExpFit fit_exp(std::span<const double> t, std::span<const double> y, bool with_offset = true);

struct SinusoidFit {
  double amplitude = 0.0;  // >= 0
  double tau = 0.0;        // us
  double phase = 0.0;      // rad in (-pi, pi]
  double offset = 0.0;
  double amplitude_err = 0.0;
  double tau_err = 0.0;
  double phase_err = 0.0;
  double offset_err = 0.0;
  FitResult raw;  // parameters (amplitude, rate, phase, offset)
};

/// y = amplitude exp(-t / tau) sin(phase - 2 pi f t) + offset at fixed f (MHz).
SinusoidFit fit_damped_sinusoid(std::span<const double> t, std::span<const double> y, double omega_mod_mhz);

/// Radiative time with pure dephasing removed: 1/T~ = 1/T - 1/T_phi.
/// T_phi <= 0 or infinite means no dephasing.
double subtract_dephasing(double t_measured, double t_phi);
/// Inverse of subtract_dephasing.
double add_dephasing(double t_tilde, double t_phi);

struct MomentEstimate {
  double n = 0.0;              // thermal floor removed
  double n_uncorrected = 0.0;  // reservoir plus thermal photons
  double m = 0.0;
  double n_th = 0.0;
  double t1_intrinsic = 0.0;  // us
  std::optional<double> eta;
  std::vector<std::string> warnings;
};

/// N and M from the measured T1, the sz decay time Tz and the radiative x time.
/// The thermal floor rescales T1 by (2 N_th + 1) and is subtracted from N.
MomentEstimate moments_from_decays(double t1, double tz, double tx_tilde, double n_th = 0.0);

/// eta = (M^2 - N^2) / N, inverting M = sqrt(N^2 + eta N).
double infer_eta(double n, double m);

WignerGrid reconstruct_wigner(const MomentEstimate& me, const GridSpec& grid);

struct Trace {
  std::vector<double> times;
  std::vector<double> values;
  std::string source;
};

struct DecayTraces {
  Trace ramsey_x;        // prepared along +x, squeezing on
  Trace ramsey_y;        // prepared along -y, squeezing on
  Trace relaxation;      // sz after a pi pulse, squeezing on
  Trace ramsey_vacuum;   // squeezing off
  double omega_mod_mhz = 5.0;
};

struct DecayEstimate {
  double tx = 0.0, ty = 0.0, tz = 0.0, t2_star = 0.0;
  double tx_err = 0.0, ty_err = 0.0, tz_err = 0.0, t2_star_err = 0.0;
  std::vector<std::string> sources;
};

DecayEstimate estimate_decays(const DecayTraces& traces);

}  // namespace sqz
