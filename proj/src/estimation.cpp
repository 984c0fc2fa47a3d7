#include "sqz/estimation.hpp"

#include "sqz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace sqz {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_trace(const char* op, std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size())
    throw InvalidInput(std::string(op) + ": time and value arrays differ in length");
  if (t.size() < 8) throw InvalidInput(std::string(op) + ": need at least 8 samples");
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!std::isfinite(t[k]) || !std::isfinite(y[k]))
      throw InvalidInput(std::string(op) + ": non-finite sample");
    if (k > 0 && !(t[k] > t[k - 1])) throw InvalidInput(std::string(op) + ": times must be increasing");
  }
}

bool is_flat(std::span<const double> y) {
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double scale = std::max({1.0, std::abs(*lo), std::abs(*hi)});
  return *hi - *lo <= 1e-12 * scale;
}

// Rate guess from a straight-line fit of log|y - y_inf| against t.
double log_linear_rate(std::span<const double> t, std::span<const double> y, double y_inf) {
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, std::abs(v - y_inf));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double d = std::abs(y[k] - y_inf);
    if (d <= 0.05 * peak) continue;
    const double l = std::log(d);
    sx += t[k];
    sy += l;
    sxx += t[k] * t[k];
    sxy += t[k] * l;
    ++n;
  }
  const double span = t.back() - t.front();
  if (n < 2) return 1.0 / span;
  const double denom = n * sxx - sx * sx;
  const double slope = denom > 0 ? (n * sxy - sx * sy) / denom : 0.0;
  return slope < 0 ? -slope : 1.0 / span;
}

double wrap_phase(double p) {
  p = std::remainder(p, 2.0 * std::numbers::pi);
  return p <= -std::numbers::pi ? p + 2.0 * std::numbers::pi : p;
}

}  // namespace

ExpFit fit_exp(std::span<const double> t, std::span<const double> y, bool with_offset) {
  check_trace("fit_exp", t, y);
  ExpFit out;
  if (is_flat(y)) {
    out.no_decay = true;
    out.tau = kInf;
    out.offset = with_offset ? y.front() : 0.0;
    out.amplitude = with_offset ? 0.0 : y.front();
    return out;
  }

  const double y_inf = with_offset ? y.back() : 0.0;
  // Time is measured from the first sample during the fit.
  const double t0 = t.front();
  Eigen::VectorXd guess(with_offset ? 3 : 2);
  guess(0) = y.front() - y_inf;
  guess(1) = log_linear_rate(t, y, y_inf);
  if (with_offset) guess(2) = y_inf;

  const Model model = [t0, with_offset](double tt, const Eigen::VectorXd& p) {
    return p(0) * std::exp(-p(1) * (tt - t0)) + (with_offset ? p(2) : 0.0);
  };
  const ModelGradient grad = [t0, with_offset](double tt, const Eigen::VectorXd& p,
                                               Eigen::Ref<Eigen::RowVectorXd> row) {
    const double e = std::exp(-p(1) * (tt - t0));
    row(0) = e;
    row(1) = -(tt - t0) * p(0) * e;
    if (with_offset) row(2) = 1.0;
  };
  out.raw = fit_least_squares(model, t, y, guess, {}, grad);
  const Eigen::VectorXd& p = out.raw.params;
  const Eigen::VectorXd se = out.raw.standard_errors();
  const double rate = p(1);
  // Refer the amplitude back to t = 0.
  out.amplitude = p(0) * std::exp(rate * t0);
  out.amplitude_err = se(0) * std::exp(rate * t0);
  out.offset = with_offset ? p(2) : 0.0;
  out.offset_err = with_offset ? se(2) : 0.0;
  if (rate <= 0.0) {
    out.no_decay = true;
    out.tau = kInf;
  } else {
    out.tau = 1.0 / rate;
    out.tau_err = se(1) / (rate * rate);
  }
  return out;
}

SinusoidFit fit_damped_sinusoid(std::span<const double> t, std::span<const double> y, double omega_mod_mhz) {
  check_trace("fit_damped_sinusoid", t, y);
  if (!std::isfinite(omega_mod_mhz)) throw InvalidInput("fit_damped_sinusoid: modulation must be finite");
  if (is_flat(y)) throw DegenerateFit("fit_damped_sinusoid: trace is constant");
  const double w = 2.0 * std::numbers::pi * omega_mod_mhz;
  const Eigen::Index m = static_cast<Eigen::Index>(t.size());
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), m);
  const double span = t.back() - t.front();

  // Variable projection over the rate: for fixed k the model is linear in
  // (p, q, c) with y = exp(-k t)(p sin wt + q cos wt) + c.
  double best_cost = kInf;
  Eigen::Vector3d best_lin = Eigen::Vector3d::Zero();
  double best_k = 1.0 / span;
  Eigen::MatrixXd basis(m, 3);
  for (int s = -1; s <= 160; ++s) {
    const double k = s < 0 ? 0.0 : 1e-3 / span * std::pow(10.0, s / 25.0);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double ti = t[static_cast<std::size_t>(i)];
      const double e = std::exp(-k * ti);
      basis(i, 0) = e * std::sin(w * ti);
      basis(i, 1) = e * std::cos(w * ti);
      basis(i, 2) = 1.0;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
    const Eigen::Vector3d lin = qr.solve(yv);
    const double cost = (basis * lin - yv).squaredNorm();
    if (std::isfinite(cost) && cost < best_cost) {
      best_cost = cost;
      best_lin = lin;
      best_k = k;
    }
  }
  // A sin(phi - wt) = (A sin phi) cos wt - (A cos phi) sin wt.
  const double amp = std::hypot(best_lin(0), best_lin(1));
  Eigen::VectorXd guess(4);
  guess << amp, best_k, std::atan2(best_lin(1), -best_lin(0)), best_lin(2);

  const Model model = [w](double tt, const Eigen::VectorXd& p) {
    return p(0) * std::exp(-p(1) * tt) * std::sin(p(2) - w * tt) + p(3);
  };
  const ModelGradient grad = [w](double tt, const Eigen::VectorXd& p, Eigen::Ref<Eigen::RowVectorXd> row) {
    const double e = std::exp(-p(1) * tt);
    const double s = std::sin(p(2) - w * tt);
    row(0) = e * s;
    row(1) = -tt * p(0) * e * s;
    row(2) = p(0) * e * std::cos(p(2) - w * tt);
    row(3) = 1.0;
  };

  SinusoidFit out;
  out.raw = fit_least_squares(model, t, y, guess, {}, grad);
  Eigen::VectorXd p = out.raw.params;
  const Eigen::VectorXd se = out.raw.standard_errors();
  if (p(0) < 0) {
    p(0) = -p(0);
    p(2) += std::numbers::pi;
  }
  if (!(p(1) > 0)) throw DegenerateFit("fit_damped_sinusoid: fitted envelope does not decay");
  out.amplitude = p(0);
  out.tau = 1.0 / p(1);
  out.phase = wrap_phase(p(2));
  out.offset = p(3);
  out.amplitude_err = se(0);
  out.tau_err = se(1) / (p(1) * p(1));
  out.phase_err = se(2);
  out.offset_err = se(3);
  return out;
}

double subtract_dephasing(double t_measured, double t_phi) {
  if (!(t_measured > 0)) throw InvalidInput("subtract_dephasing: measured time must be > 0");
  if (!(t_phi > 0) || std::isinf(t_phi)) return t_measured;
  if (t_measured >= t_phi)
    throw UnphysicalRates("subtract_dephasing: T = " + std::to_string(t_measured) +
                          " us is not shorter than T_phi = " + std::to_string(t_phi) +
                          " us, radiative rate would be non-positive");
  return 1.0 / (1.0 / t_measured - 1.0 / t_phi);
}

double add_dephasing(double t_tilde, double t_phi) {
  if (!(t_tilde > 0)) throw InvalidInput("add_dephasing: radiative time must be > 0");
  if (!(t_phi > 0) || std::isinf(t_phi)) return t_tilde;
  return 1.0 / (1.0 / t_tilde + 1.0 / t_phi);
}

MomentEstimate moments_from_decays(double t1, double tz, double tx_tilde, double n_th) {
  if (!(t1 > 0) || !(tz > 0) || !(tx_tilde > 0))
    throw InvalidInput("moments_from_decays: T1, Tz and Tx~ must be > 0");
  if (!(n_th >= 0)) throw InvalidInput("moments_from_decays: N_th must be >= 0");

  MomentEstimate me;
  me.n_th = n_th;
  me.t1_intrinsic = t1 * (2.0 * n_th + 1.0);
  const double n_total = 0.5 * (me.t1_intrinsic / tz - 1.0);
  me.n_uncorrected = n_total;
  me.n = n_total - n_th;
  me.m = n_total + 0.5 - me.t1_intrinsic / tx_tilde;
  if (me.n < -1e-9) {
    std::ostringstream msg;
    msg << "moments_from_decays: inferred N = " << me.n << " is negative (Tz = " << tz
        << " us longer than the thermal-limited value)";
    throw InconsistentInputs(msg.str());
  }
  me.n = std::max(me.n, 0.0);
  if (me.m * me.m > me.n * (me.n + 1.0) + 1e-12) {
    std::ostringstream msg;
    msg << "M^2 = " << me.m * me.m << " exceeds N(N+1) = " << me.n * (me.n + 1.0);
    me.warnings.push_back(msg.str());
  }
  if (me.n > 0 && me.m > me.n) me.eta = infer_eta(me.n, me.m);
  return me;
}

double infer_eta(double n, double m) {
  if (!(n > 0)) throw InvalidInput("infer_eta: N must be > 0");
  if (!(m > n))
    throw NotSqueezed("infer_eta: M = " + std::to_string(m) + " does not exceed N = " + std::to_string(n));
  return (m * m - n * n) / n;
}

WignerGrid reconstruct_wigner(const MomentEstimate& me, const GridSpec& grid) {
  const double m = std::abs(me.m);
  const QuadratureVariances v{2.0 * (me.n + m + 0.5), 2.0 * (me.n - m + 0.5)};
  if (!(v.sigma_q_sq > 0) || v.sigma_i_sq * v.sigma_q_sq < 1.0 - 1e-12)
    throw InvalidInput("reconstruct_wigner: estimate gives unphysical variances");
  return wigner(v, grid);
}

DecayEstimate estimate_decays(const DecayTraces& tr) {
  DecayEstimate out;
  const SinusoidFit x = fit_damped_sinusoid(tr.ramsey_x.times, tr.ramsey_x.values, tr.omega_mod_mhz);
  const SinusoidFit y = fit_damped_sinusoid(tr.ramsey_y.times, tr.ramsey_y.values, tr.omega_mod_mhz);
  const SinusoidFit v = fit_damped_sinusoid(tr.ramsey_vacuum.times, tr.ramsey_vacuum.values, tr.omega_mod_mhz);
  const ExpFit z = fit_exp(tr.relaxation.times, tr.relaxation.values, true);
  if (z.no_decay) throw DegenerateFit("estimate_decays: relaxation trace does not decay");
  out.tx = x.tau;
  out.tx_err = x.tau_err;
  out.ty = y.tau;
  out.ty_err = y.tau_err;
  out.tz = z.tau;
  out.tz_err = z.tau_err;
  out.t2_star = v.tau;
  out.t2_star_err = v.tau_err;
  out.sources = {tr.ramsey_x.source, tr.ramsey_y.source, tr.relaxation.source, tr.ramsey_vacuum.source};
  return out;
}

}  // namespace sqz
