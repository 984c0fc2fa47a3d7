#include "sqz/master_equation.hpp"

#include "sqz/errors.hpp"

#include <cmath>
#include <numbers>

namespace sqz {
namespace {

constexpr double kCouplingFloor = 1e-12;

}  // namespace

Eigen::MatrixXd uniform_rates(Eigen::Index dimension, double gamma_base) {
  if (!(gamma_base >= 0)) throw InvalidInput("uniform_rates: base rate must be >= 0");
  return Eigen::MatrixXd::Constant(dimension, dimension, gamma_base);
}

MasterEquationRHS master_equation_rhs(const PolaritonSystem& ps, const SqueezedReservoir& r,
                                      const Eigen::MatrixXd& base_rates) {
  const Eigen::Index dim = ps.dimension();
  if (base_rates.rows() != dim || base_rates.cols() != dim)
    throw InvalidInput("master_equation_rhs: rate matrix does not match the system dimension");
  if ((base_rates.array() < 0).any()) throw InvalidInput("master_equation_rhs: rates must be >= 0");

  const double half_band = 0.5 * r.bandwidth_mhz() * 1e-3;
  MasterEquationRHS rhs;
  rhs.dimension = dim;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const Complex a = ps.a(i, j);
      const double a_abs = std::abs(a);
      if (a_abs < kCouplingFloor || base_rates(i, j) == 0.0) continue;
      // The two-level decay rate is gamma_ij |A|^2; the dissipator prefactor is half of it.
      const double kappa = 0.5 * base_rates(i, j) * a_abs * a_abs;
      const double w = ps.transition_ghz(i, j);
      const bool in_band = std::abs(w - r.omega0_ghz()) <= half_band;
      const double n = in_band ? r.n() : 0.0;
      const Complex m = in_band ? r.m() : Complex(0.0);

      rhs.terms.push_back({DissipatorKind::Emission, i, j, kappa * (n + 1.0), 0.0});
      if (n > 0) rhs.terms.push_back({DissipatorKind::Absorption, i, j, kappa * n, 0.0});
      if (std::abs(m) > 0) {
        const Complex phase = std::conj(a) / a_abs;
        const Complex c = 2.0 * kappa * phase * phase * m;
        const double delta = 2.0 * std::numbers::pi * (r.omega0_ghz() - w) * 1e3;
        rhs.terms.push_back({DissipatorKind::Squeeze, i, j, c, -2.0 * delta});
        rhs.terms.push_back({DissipatorKind::SqueezeConj, i, j, std::conj(c), 2.0 * delta});
      }
    }
  }
  return rhs;
}

void apply_unchecked(const MasterEquationRHS& rhs, const ComplexMatrix& rho, double t, ComplexMatrix& out) {
  out.setZero(rho.rows(), rho.cols());
  for (const DissipatorTerm& term : rhs.terms) {
    const Eigen::Index i = term.lower;
    const Eigen::Index j = term.upper;
    switch (term.kind) {
      case DissipatorKind::Emission: {
        const double k = term.coefficient.real();
        out(i, i) += 2.0 * k * rho(j, j);
        out.row(j) -= k * rho.row(j);
        out.col(j) -= k * rho.col(j);
        break;
      }
      case DissipatorKind::Absorption: {
        const double k = term.coefficient.real();
        out(j, j) += 2.0 * k * rho(i, i);
        out.row(i) -= k * rho.row(i);
        out.col(i) -= k * rho.col(i);
        break;
      }
      case DissipatorKind::Squeeze:
        out(j, i) += term.coefficient * std::polar(1.0, term.phase_rate * t) * rho(i, j);
        break;
      case DissipatorKind::SqueezeConj:
        out(i, j) += term.coefficient * std::polar(1.0, term.phase_rate * t) * rho(j, i);
        break;
    }
  }
}

ComplexMatrix apply(const MasterEquationRHS& rhs, const ComplexMatrix& rho, double t) {
  if (rho.rows() != rhs.dimension || rho.cols() != rhs.dimension)
    throw InvalidInput("apply: density matrix has the wrong dimension");
  if (!is_hermitian(rho, 1e-10)) throw InvalidInput("apply: density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-8) throw InvalidInput("apply: density matrix trace is not 1");
  ComplexMatrix out;
  apply_unchecked(rhs, rho, t, out);
  return out;
}

std::vector<ComplexMatrix> evolve_master_equation(const MasterEquationRHS& rhs, const ComplexMatrix& rho0,
                                                  std::span<const double> times, const OdeOptions& opts) {
  if (times.empty()) return {};
  apply(rhs, rho0, 0.0);  // validates rho0
  const Eigen::Index d = rhs.dimension;
  const auto f = [&rhs, d](double t, const ComplexVector& y) {
    ComplexMatrix out;
    apply_unchecked(rhs, Eigen::Map<const ComplexMatrix>(y.data(), d, d), t, out);
    return ComplexVector(Eigen::Map<const ComplexVector>(out.data(), d * d));
  };
  const ComplexVector y0 = Eigen::Map<const ComplexVector>(rho0.data(), d * d);
  const double t0 = std::min(0.0, times.front());
  const double t1 = std::max(times.back(), t0 + 1e-12);
  const auto traj = integrate_ode(f, y0, t0, t1, times, opts);
  std::vector<ComplexMatrix> out;
  out.reserve(traj.states.size());
  for (const ComplexVector& y : traj.states) out.emplace_back(Eigen::Map<const ComplexMatrix>(y.data(), d, d));
  return out;
}

Eigen::Vector3d bloch_components(const ComplexMatrix& rho, Eigen::Index lower, Eigen::Index upper) {
  const Complex c = 2.0 * rho(upper, lower);
  return {c.real(), c.imag(), (rho(lower, lower) - rho(upper, upper)).real()};
}

ComplexMatrix density_from_bloch(Eigen::Index dimension, Eigen::Index lower, Eigen::Index upper,
                                 const Eigen::Vector3d& s) {
  if (lower == upper || lower < 0 || upper < 0 || lower >= dimension || upper >= dimension)
    throw InvalidInput("density_from_bloch: invalid level pair");
  if (s.squaredNorm() > 1.0 + 1e-9) throw InvalidInput("density_from_bloch: Bloch vector outside the ball");
  ComplexMatrix rho = ComplexMatrix::Zero(dimension, dimension);
  rho(lower, lower) = 0.5 * (1.0 + s.z());
  rho(upper, upper) = 0.5 * (1.0 - s.z());
  rho(upper, lower) = 0.5 * Complex(s.x(), s.y());
  rho(lower, upper) = std::conj(rho(upper, lower));
  return rho;
}

}  // namespace sqz
