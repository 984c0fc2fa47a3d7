#include "sqz/polariton.hpp"

#include "sqz/errors.hpp"
#include "sqz/numerics/eigh.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace sqz {
namespace {

constexpr double kCouplingFloor = 1e-6;  // |A| below this counts as forbidden

}  // namespace

void TransmonCavityParams::validate() const {
  auto fail = [](const std::string& what) { throw InvalidInput("TransmonCavityParams: " + what); };
  if (!(e_c > 0)) fail("E_C must be > 0");
  if (!(e_j > 0)) fail("E_J must be > 0");
  if (!(omega_c > 0)) fail("omega_c must be > 0");
  if (!(g >= 0)) fail("g must be >= 0");
  if (n_charge < 3) fail("n_charge must be >= 3");
  if (n_transmon < 2) fail("n_transmon must be >= 2");
  if (n_photon < 2) fail("n_photon must be >= 2");
  if (n_transmon > 2 * n_charge + 1)
    fail("n_transmon = " + std::to_string(n_transmon) + " exceeds the " +
         std::to_string(2 * n_charge + 1) + " charge states");
}

std::vector<std::string> TransmonCavityParams::warnings() const {
  std::vector<std::string> out;
  if (e_j / e_c < 20.0) {
    std::ostringstream msg;
    msg << "E_J/E_C = " << e_j / e_c << " is below the transmon regime (20)";
    out.push_back(msg.str());
  }
  if (n_transmon < 3 || n_photon < 3) out.push_back("cutoffs below 3 truncate the second excitation manifold");
  return out;
}

TransmonLevels transmon_levels(const TransmonCavityParams& p) {
  p.validate();
  const int dim = 2 * p.n_charge + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd charge(dim);
  for (int k = 0; k < dim; ++k) {
    charge(k) = k - p.n_charge;
    h(k, k) = 4.0 * p.e_c * charge(k) * charge(k);
    if (k + 1 < dim) h(k, k + 1) = h(k + 1, k) = -0.5 * p.e_j;
  }
  const auto eig = eigh(h);
  const int n = p.n_transmon;
  const Eigen::MatrixXd v = eig.eigenvectors.leftCols(n);
  const Eigen::MatrixXd n_op = v.transpose() * charge.asDiagonal() * v;
  const double n01 = n_op(0, 1);
  if (std::abs(n01) < 1e-14) throw InvalidInput("transmon_levels: vanishing <0|n|1>");

  TransmonLevels out;
  out.energies = eig.eigenvalues.head(n).array() - eig.eigenvalues(0);
  out.lowering = Eigen::MatrixXd::Zero(n, n);
  // Only neighbouring levels: k -> k+3 and higher elements are off-resonant by
  // multiples of omega and drop out under the rotating-wave approximation.
  for (int k = 0; k + 1 < n; ++k) out.lowering(k, k + 1) = n_op(k, k + 1) / n01;
  return out;
}

ComplexMatrix build_hamiltonian(const TransmonCavityParams& p) {
  const TransmonLevels t = transmon_levels(p);
  const int nt = p.n_transmon;
  const int np = p.n_photon;
  const auto idx = [np](int k, int m) { return static_cast<Eigen::Index>(k * np + m); };

  ComplexMatrix h = ComplexMatrix::Zero(nt * np, nt * np);
  for (int k = 0; k < nt; ++k)
    for (int m = 0; m < np; ++m) h(idx(k, m), idx(k, m)) = t.energies(k) + m * p.omega_c;

  // g (b^dag a + b a^dag): <k, m+1| b a^dag |l, m> = b_kl sqrt(m+1).
  for (int k = 0; k < nt; ++k) {
    for (int l = k + 1; l < nt; ++l) {
      const double b = t.lowering(k, l);
      if (b == 0.0) continue;
      for (int m = 0; m + 1 < np; ++m) {
        const double v = p.g * b * std::sqrt(m + 1.0);
        h(idx(k, m + 1), idx(l, m)) += v;
        h(idx(l, m), idx(k, m + 1)) += v;
      }
    }
  }
  return h;
}

Eigen::Index PolaritonSystem::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<Eigen::Index>(i);
  throw InvalidInput("PolaritonSystem: no state labelled '" + label + "'");
}

PolaritonSystem diagonalize_polaritons(const ComplexMatrix& h, const TransmonCavityParams& p) {
  p.validate();
  if (h.rows() != p.dimension() || h.cols() != p.dimension())
    throw InvalidInput("diagonalize_polaritons: Hamiltonian size does not match the cutoffs");
  const int np = p.n_photon;
  const Eigen::Index dim = h.rows();
  const auto eig = eigh(h);

  PolaritonSystem ps;
  ps.n_transmon = p.n_transmon;
  ps.n_photon = np;
  ps.energies = eig.eigenvalues.array() - eig.eigenvalues(0);
  ps.states = eig.eigenvectors;

  ComplexMatrix x = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < p.n_transmon; ++k) {
    for (int m = 0; m + 1 < np; ++m) {
      const double s = std::sqrt(m + 1.0);
      x(k * np + m, k * np + m + 1) = s;
      x(k * np + m + 1, k * np + m) = s;
    }
  }
  const ComplexMatrix full = ps.states.adjoint() * x * ps.states;
  ps.a = full.triangularView<Eigen::StrictlyUpper>();

  // The coupling conserves k + m, so each dressed state has a sharp excitation number.
  ps.excitations.resize(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    double mean = 0.0;
    for (Eigen::Index b = 0; b < dim; ++b)
      mean += std::norm(ps.states(b, i)) * static_cast<double>(b / np + b % np);
    ps.excitations[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(mean));
  }
  std::vector<int> seen(static_cast<std::size_t>(p.n_transmon + np), 0);
  ps.labels.resize(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    const int n = ps.excitations[static_cast<std::size_t>(i)];
    const int k = seen[static_cast<std::size_t>(n)]++;
    std::string label;
    if (n == 0)
      label = "g";
    else if (n == 1 && k < 2)
      label = k == 0 ? "-" : "+";
    else
      label = std::to_string(n) + "." + std::to_string(k);
    ps.labels[static_cast<std::size_t>(i)] = label;
  }
  return ps;
}

DecayRates two_level_reduction(const PolaritonSystem& ps, double gamma_base, const SqueezedReservoir& r,
                               double gamma_phi, TransitionChoice transition) {
  const Eigen::Index lo = transition.lower;
  const Eigen::Index up = transition.upper;
  const Eigen::Index dim = ps.dimension();
  if (lo < 0 || up >= dim || lo >= up)
    throw InvalidInput("two_level_reduction: transition must satisfy 0 <= lower < upper < dimension");
  if (!(gamma_base > 0)) throw InvalidInput("two_level_reduction: base rate must be > 0");

  const double coupling = std::abs(ps.a(lo, up));
  if (coupling < kCouplingFloor)
    throw InvalidInput("two_level_reduction: selected transition is dipole forbidden");

  const double w_sel = ps.transition_ghz(lo, up);
  const double bw_ghz = r.bandwidth_mhz() * 1e-3;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      if (i == lo && j == up) continue;
      const bool shares_lower = i == lo || j == lo;
      const bool shares_upper = i == up || j == up;
      if (!shares_lower && !shares_upper) continue;
      if (std::abs(ps.a(i, j)) < kCouplingFloor) continue;
      const double w = std::abs(ps.transition_ghz(i, j));
      std::string problem;
      // Transitions out of the lower level must be well separated from the
      // selected line; transitions out of the upper level only need to miss the band.
      if (shares_lower && std::abs(w - w_sel) < 5.0 * bw_ghz)
        problem = "is within 5 bandwidths of the selected transition";
      else if (std::abs(w - r.omega0_ghz()) <= 0.5 * bw_ghz)
        problem = "lies inside the squeezing band";
      if (!problem.empty()) {
        std::ostringstream msg;
        msg << "two_level_reduction: transition " << ps.labels[static_cast<std::size_t>(i)] << " -> "
            << ps.labels[static_cast<std::size_t>(j)] << " at " << w << " GHz " << problem;
        throw MultiTransitionError(msg.str());
      }
    }
  }

  DecayRates out;
  out.gamma = coupling * coupling * gamma_base;
  out.gamma_phi = gamma_phi;
  out.n = r.n();
  out.m_abs = r.m_abs();
  out.delta_mhz = (r.omega0_ghz() - w_sel) * 1e3;
  out.validate();
  return out;
}

}  // namespace sqz
