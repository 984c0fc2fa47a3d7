#pragma once

// Run configuration read from an INI file.
//
//   [decay]      t1_us, t_phi_us
//   [qubit]      detuning_mhz                    (direct two-level rates)
//   [transmon]   e_c_ghz, e_j_ghz, omega_c_ghz, g_ghz, n_transmon, n_photon,
//                n_charge, transition             (dressed-state model)
//   [reservoir]  n, m, m_phase_rad, bandwidth_mhz, center_ghz, n_th or
//                p_excited, eta
//   [protocol]   omega_mod_mhz, times_us, phi_pi, delta_mhz, n_values,
//                prep_theta_pi, prep_phi_pi, drive_khz
//   [wigner]     points, n_std
//
// Exactly one of [qubit] and [transmon] must be present. Grids are either a
// comma-separated list or "start:step:stop" (stop included).

#include "sqz/blochdyn.hpp"
#include "sqz/errors.hpp"
#include "sqz/polariton.hpp"
#include "sqz/protocols.hpp"
#include "sqz/reservoir.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sqz {

// Field-level configuration problem; the message names the section and key.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

struct QubitSpec {
  double detuning_mhz = 0.0;
};

struct TransmonSpec {
  TransmonCavityParams params;
  std::string lower = "g";
  std::string upper = "-";
};

struct ReservoirSpec {
  double n = 0.0;
  double m = 0.0;
  double m_phase = 0.0;
  double bandwidth_mhz = 13.0;
  std::optional<double> center_ghz;  // defaults to the selected transition
  double n_th = 0.0;
  std::optional<double> p_excited;   // thermal population the floor was derived from
  double eta = 1.0;
};

struct ProtocolSpec {
  double omega_mod_mhz = 5.0;
  std::vector<double> times_us;
  std::vector<double> phi;  // rad
  std::vector<double> delta_mhz;
  std::vector<double> n_values;
  double prep_theta = 0.0;
  double prep_phi = 0.0;
  double drive_khz = 0.0;
};

struct WignerSpec {
  int points = 201;
  double n_std = 5.0;
};

struct RunConfig {
  double t1_us = 0.0;
  double t_phi_us = 0.0;  // 0 means no pure dephasing
  std::optional<QubitSpec> qubit;
  std::optional<TransmonSpec> transmon;
  ReservoirSpec reservoir;
  ProtocolSpec protocol;
  WignerSpec wigner;
};

RunConfig parse_config(std::istream& is, const std::string& name);
RunConfig load_config(const std::string& path);

/// Parses "a:step:b" or "v1, v2, ...". Throws ConfigError naming `field`.
std::vector<double> parse_grid(const std::string& text, const std::string& field);

/// Two-level rates for the configured system. A thermal floor N_th adds to the
/// photon number and T1 is read as the measured value, so the intrinsic rate is
/// 1 / (T1 (2 N_th + 1)). For the transmon model the base rate is calibrated on
/// the selected transition.
DecayRates resolve_rates(const RunConfig& cfg);

SqueezedReservoir resolve_reservoir(const RunConfig& cfg, double center_ghz);

}  // namespace sqz
