#pragma once

// Multi-level master equation for dressed transmon-cavity states damped by a
// broadband squeezed reservoir. The density matrix is in the interaction
// picture with respect to the dressed Hamiltonian, so only dissipators remain.
// Each transition i < j gets its own Gardiner dissipator; only transitions
// inside the squeezing band see N and M, all others decay into vacuum.

#include "sqz/numerics/matrix.hpp"
#include "sqz/numerics/ode.hpp"
#include "sqz/polariton.hpp"
#include "sqz/reservoir.hpp"

#include <span>
#include <vector>

namespace sqz {

enum class DissipatorKind {
  Emission,     // (N+1): S- rho S+
  Absorption,   // N: S+ rho S-
  Squeeze,      // M: rho_ij feeds rho_ji
  SqueezeConj,  // M*: rho_ji feeds rho_ij
};

struct DissipatorTerm {
  DissipatorKind kind;
  Eigen::Index lower;
  Eigen::Index upper;
  Complex coefficient;  // real rate for Emission/Absorption
  double phase_rate;    // rad/us; Squeeze terms carry exp(i phase_rate t)
};

struct MasterEquationRHS {
  Eigen::Index dimension = 0;
  std::vector<DissipatorTerm> terms;
};

/// Base rates gamma_ij (1/us) for every pair; the decay rate of transition
/// i -> j is gamma_ij |A_ij|^2.
Eigen::MatrixXd uniform_rates(Eigen::Index dimension, double gamma_base);

MasterEquationRHS master_equation_rhs(const PolaritonSystem& ps, const SqueezedReservoir& r,
                                      const Eigen::MatrixXd& base_rates);

/// d rho / dt. Throws InvalidInput unless rho is Hermitian with unit trace.
ComplexMatrix apply(const MasterEquationRHS& rhs, const ComplexMatrix& rho, double t);

/// Same as apply without validating rho.
void apply_unchecked(const MasterEquationRHS& rhs, const ComplexMatrix& rho, double t, ComplexMatrix& out);

std::vector<ComplexMatrix> evolve_master_equation(const MasterEquationRHS& rhs, const ComplexMatrix& rho0,
                                                  std::span<const double> times,
                                                  const OdeOptions& opts = {});

/// (sx, sy, sz) of the two-level block {lower, upper}, ground-state sz = +1.
Eigen::Vector3d bloch_components(const ComplexMatrix& rho, Eigen::Index lower, Eigen::Index upper);

/// Density matrix with the two-level block {lower, upper} set to the Bloch vector s.
ComplexMatrix density_from_bloch(Eigen::Index dimension, Eigen::Index lower, Eigen::Index upper,
                                 const Eigen::Vector3d& s);

}  // namespace sqz
