#pragma once

// Transmon coupled to a single cavity mode: charge-basis transmon spectrum,
// rotating-wave Jaynes-Cummings Hamiltonian, dressed (polariton) states and the
// cavity-quadrature matrix elements between them. Energies in GHz.

#include "sqz/blochdyn.hpp"
#include "sqz/numerics/matrix.hpp"
#include "sqz/reservoir.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace sqz {

struct TransmonCavityParams {
  double e_c = 0.208;     // charging energy
  double e_j = 23.27;     // Josephson energy
  double omega_c = 6.0456;
  double g = 0.126;
  int n_transmon = 5;  // transmon levels kept
  int n_photon = 6;    // Fock states kept
  int n_charge = 20;   // charge states -n_charge..n_charge

  int dimension() const { return n_transmon * n_photon; }
  void validate() const;  // throws InvalidInput
  /// Non-fatal remarks, e.g. E_J/E_C below the transmon regime.
  std::vector<std::string> warnings() const;
};

struct TransmonLevels {
  Eigen::VectorXd energies;  // lowest n_transmon levels, ground at 0
  Eigen::MatrixXd lowering;  // <k|n|k+1>/<0|n|1> on the superdiagonal
};

/// 4 E_C n^2 - E_J cos(phi) on charge states, offset charge zero.
TransmonLevels transmon_levels(const TransmonCavityParams& p);

/// Bare-basis Hamiltonian; basis index = transmon_level * n_photon + photon_number.
ComplexMatrix build_hamiltonian(const TransmonCavityParams& p);

struct PolaritonSystem {
  Eigen::VectorXd energies;  // ascending, ground at 0
  ComplexMatrix states;      // dressed states as columns in the bare basis
  ComplexMatrix a;           // <i|(a + a^dag)|j> for i < j, zero on and below the diagonal
  std::vector<std::string> labels;
  std::vector<int> excitations;  // excitation number of each dressed state
  int n_transmon = 0;
  int n_photon = 0;

  Eigen::Index dimension() const { return energies.size(); }
  double transition_ghz(Eigen::Index lower, Eigen::Index upper) const {
    return energies(upper) - energies(lower);
  }
  /// Index of the state with this label; throws InvalidInput if absent.
  Eigen::Index index_of(const std::string& label) const;
};

/// Labels: "g" for the ground state, "-" and "+" for the single-excitation
/// doublet, "n.k" for the k-th state (from 0) of excitation manifold n.
PolaritonSystem diagonalize_polaritons(const ComplexMatrix& h, const TransmonCavityParams& p);

struct TransitionChoice {
  Eigen::Index lower = 0;
  Eigen::Index upper = 1;
};

/// Effective two-level rates for the chosen transition: gamma = |A|^2 gamma_base
/// and delta = omega0 - omega(lower -> upper). Throws MultiTransitionError when
/// the squeezing band reaches another transition out of either level.
DecayRates two_level_reduction(const PolaritonSystem& ps, double gamma_base, const SqueezedReservoir& r,
                               double gamma_phi = 0.0, TransitionChoice transition = {});

}  // namespace sqz
