#include "sqz/blochdyn.hpp"

#include "sqz/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sqz {
namespace {

constexpr Complex kI{0.0, 1.0};

Eigen::Matrix3d cross_matrix(const Eigen::Vector3d& w) {
  Eigen::Matrix3d m;
  m << 0.0, -w.z(), w.y(),  //
      w.z(), 0.0, -w.x(),   //
      -w.y(), w.x(), 0.0;
  return m;
}

// Linear part A and inhomogeneous part b of ds/dt = A s + b at delta = 0.
std::pair<Eigen::Matrix3d, Eigen::Vector3d> resonant_system(const DecayRates& r,
                                                            const std::optional<Eigen::Vector3d>& drive) {
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  a(0, 0) = -(r.gamma * (r.n - r.m_abs + 0.5) + r.gamma_phi);
  a(1, 1) = -(r.gamma * (r.n + r.m_abs + 0.5) + r.gamma_phi);
  a(2, 2) = -r.gamma * (2.0 * r.n + 1.0);
  if (drive) a += cross_matrix(*drive);
  return {a, Eigen::Vector3d(0.0, 0.0, r.gamma)};
}

// sinh(x)/x, accurate near x = 0.
Complex sinhc(Complex x) {
  if (std::abs(x) < 1e-4) {
    const Complex x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}

}  // namespace

DecayRates DecayRates::from_times(double t1, double t_phi, double n, double m_abs, double delta_mhz) {
  if (!(t1 > 0)) throw InvalidInput("DecayRates: T1 must be > 0");
  const double gamma_phi = (t_phi > 0 && std::isfinite(t_phi)) ? 1.0 / t_phi : 0.0;
  DecayRates r{1.0 / t1, gamma_phi, n, m_abs, delta_mhz};
  r.validate();
  return r;
}

double DecayRates::angular_detuning() const { return 2.0 * std::numbers::pi * delta_mhz; }

void DecayRates::validate() const {
  if (!(gamma > 0)) throw InvalidInput("DecayRates: gamma must be > 0");
  if (!(gamma_phi >= 0)) throw InvalidInput("DecayRates: gamma_phi must be >= 0");
  if (!(n >= 0)) throw InvalidInput("DecayRates: N must be >= 0");
  if (!(m_abs >= 0)) throw InvalidInput("DecayRates: |M| must be >= 0");
  if (m_abs * m_abs > n * (n + 1.0) + 1e-12)
    throw InvalidInput("DecayRates: |M|^2 exceeds N(N+1)");
  if (!std::isfinite(delta_mhz)) throw InvalidInput("DecayRates: detuning must be finite");
  if (!(n_floor >= 0 && n_floor <= n)) throw InvalidInput("DecayRates: thermal floor must lie in [0, N]");
}

Eigen::Vector3d bloch_rhs(const BlochState& s, const DecayRates& r,
                          const std::optional<Eigen::Vector3d>& drive) {
  if (r.delta_mhz != 0.0)
    throw InvalidInput("bloch_rhs: requires resonant squeezing; use detuned_bloch_rhs");
  const auto [a, b] = resonant_system(r, drive);
  return a * s.vec() + b;
}

Eigen::Vector3d detuned_bloch_rhs(const BlochState& s, const DecayRates& r, double t) {
  // c = sx + i sy obeys dc/dt = -Gamma_N c + Gamma_M exp(-2 i w t) conj(c).
  const double w = r.angular_detuning();
  const Complex c(s.sx, s.sy);
  const Complex dc = -r.gamma_n() * c + r.gamma_m() * std::exp(-2.0 * kI * w * t) * std::conj(c);
  const double dz = -r.gamma * (2.0 * r.n + 1.0) * s.sz + r.gamma;
  return {dc.real(), dc.imag(), dz};
}

AxisTimescales axis_timescales(const DecayRates& r) {
  if (r.delta_mhz != 0.0) throw InvalidInput("axis_timescales: requires resonant squeezing");
  const double x_factor = r.n - r.m_abs + 0.5;
  if (!(x_factor > 0))
    throw UnphysicalRates("axis_timescales: N - M + 1/2 = " + std::to_string(x_factor) + " is not positive");
  const double y_factor = r.n + r.m_abs + 0.5;
  AxisTimescales out;
  out.tx_tilde = 1.0 / (r.gamma * x_factor);
  out.ty_tilde = 1.0 / (r.gamma * y_factor);
  out.tx = 1.0 / (r.gamma * x_factor + r.gamma_phi);
  out.ty = 1.0 / (r.gamma * y_factor + r.gamma_phi);
  out.tz = 1.0 / (r.gamma * (2.0 * r.n + 1.0));
  return out;
}

std::pair<Complex, Complex> decay_eigenrates(const DecayRates& r) {
  const double w = r.angular_detuning();
  const double gm = r.gamma_m();
  const Complex root = std::sqrt(Complex(gm * gm - w * w, 0.0));
  return {r.gamma_n() + root, r.gamma_n() - root};
}

Eigen::Matrix2cd polarization_generator(const DecayRates& r) {
  const double w = r.angular_detuning();
  Eigen::Matrix2cd a;
  a << -r.gamma_n() - kI * w, r.gamma_m(),  //
      r.gamma_m(), -r.gamma_n() + kI * w;
  return a;
}

Eigen::Matrix2cd polarization_propagator(const DecayRates& r, double t) {
  if (!(t >= 0)) throw InvalidInput("polarization_propagator: t must be >= 0");
  // generator = -Gamma_N I + B with B^2 = kappa^2 I, kappa^2 = Gamma_M^2 - w^2.
  const double w = r.angular_detuning();
  const double gm = r.gamma_m();
  const Complex kappa = std::sqrt(Complex(gm * gm - w * w, 0.0));
  Eigen::Matrix2cd b;
  b << -kI * w, gm,  //
      gm, kI * w;
  const Complex ch = std::cosh(kappa * t);
  const Complex sh_over_k = t * sinhc(kappa * t);
  return std::exp(-r.gamma_n() * t) * (ch * Eigen::Matrix2cd::Identity() + sh_over_k * b);
}

BlochState steady_state(const DecayRates& r, const std::optional<Eigen::Vector3d>& drive) {
  r.validate();
  if (!drive) return {0.0, 0.0, 1.0 / (2.0 * r.n + 1.0)};
  if (r.delta_mhz != 0.0) throw InvalidInput("steady_state: a drive requires resonant squeezing");
  const auto [a, b] = resonant_system(r, drive);
  Eigen::FullPivLU<Eigen::Matrix3d> lu(a);
  if (!lu.isInvertible()) throw InvalidInput("steady_state: Bloch equations are singular");
  return BlochState::from(lu.solve(-b));
}

BlochState evolve(const BlochState& s0, const DecayRates& r, double duration, double t_start) {
  if (!(duration >= 0)) throw InvalidInput("evolve: duration must be >= 0");
  const double w = r.angular_detuning();
  // Rotate into coordinates where the squeezing phase at t_start is zero.
  const Complex align = std::exp(kI * w * t_start);
  const Complex c0 = Complex(s0.sx, s0.sy) * align;

  const Eigen::Matrix2cd p = polarization_propagator(r, duration);
  const Eigen::Vector2cd sig0(0.5 * std::conj(c0), 0.5 * c0);  // (sigma+, sigma-)
  const Eigen::Vector2cd sig = p * sig0;
  const Complex c = 2.0 * std::exp(-kI * w * duration) * sig(1) / align;

  const double sz_inf = 1.0 / (2.0 * r.n + 1.0);
  const double sz = sz_inf + (s0.sz - sz_inf) * std::exp(-r.gamma * (2.0 * r.n + 1.0) * duration);
  return {c.real(), c.imag(), sz};
}

}  // namespace sqz
