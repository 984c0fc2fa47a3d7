#pragma once

// End-to-end checks of the model against reference measurements. Each
// criterion runs the forward model (and, where relevant, the fits) and
// reports a pass/fail line with the numbers behind it.

#include "sqz/config.hpp"
#include "sqz/polariton.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sqz {

struct AcceptanceParams {
  // Device and reservoir.
  double t1 = 0.65;
  double t_phi = 6.6;
  double n = 0.88;
  double m = 1.08;
  double eta = 0.5;
  double bandwidth_mhz = 13.0;
  double omega_mod_mhz = 5.0;
  double p_excited = 0.018;
  TransmonCavityParams transmon;

  // Reference values the model is compared with.
  double ref_t2_star = 1.08, ref_t2_star_err = 0.04;
  double ref_tx = 1.67, ref_ty = 0.28;
  double ref_tx_tilde = 2.2, ref_ty_tilde = 0.29;
  double ref_sz = 0.36;
  double ref_qubit_ghz = 5.8989;
  double ref_splitting_mhz = 255.0;
  double ref_m_minus_n = 0.20;
  double ref_n_th_max = 0.019;
  double ref_t1_int_max = 0.675;
};

/// Reference values stay at their defaults; the device block comes from cfg.
AcceptanceParams acceptance_params(const RunConfig& cfg);

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceParams& p = {});

/// One "[PASS]"/"[FAIL]" line per criterion; returns the number of failures.
int print_acceptance(std::ostream& os, const std::vector<CriterionResult>& results);

}  // namespace sqz
