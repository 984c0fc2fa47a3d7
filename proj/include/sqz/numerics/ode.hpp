#pragma once

// Adaptive Dormand-Prince 5(4) integrator with PI step-size control and the
// standard dopri5 continuous extension for output at arbitrary sample times.
//
// State is any Eigen dense vector (real or complex). Time is in microseconds
// throughout the library, but nothing here depends on units.

#include "sqz/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace sqz {

template <typename State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
};

struct OdeOptions {
  double tol = 1e-8;  // absolute and relative local error per step
  double initial_step = 0.0;  // 0 selects a step automatically
  long max_steps = 5'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

namespace detail::dopri {

inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

template <typename State>
double error_norm(const State& err, const State& y0, const State& y1, double tol) {
  const auto scale = (tol + tol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).eval();
  const double n = static_cast<double>(err.size());
  return n == 0 ? 0.0 : std::sqrt((err.cwiseAbs().array() / scale).square().sum() / n);
}

}  // namespace detail::dopri

/// Integrates y' = f(t, y) from t0 to t1 and returns the solution at each
/// requested sample time (which must be sorted and lie inside [t0, t1]).
///
/// Throws StiffnessError when the step size underflows.
template <typename State, typename Rhs>
Trajectory<State> integrate_ode(Rhs&& f, const State& y0, double t0, double t1,
                                std::span<const double> sample_times, const OdeOptions& opts,
                                OdeStats* stats = nullptr) {
  namespace dp = detail::dopri;
  if (!(opts.tol > 0)) throw InvalidInput("integrate_ode: tolerance must be positive");
  if (!(t1 > t0)) throw InvalidInput("integrate_ode: time span must satisfy t1 > t0");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < t0 || sample_times[i] > t1 ||
        (i > 0 && sample_times[i] < sample_times[i - 1]))
      throw InvalidInput("integrate_ode: sample times must be sorted and inside the time span");
  }

  Trajectory<State> out;
  out.times.assign(sample_times.begin(), sample_times.end());
  out.states.reserve(sample_times.size());
  std::size_t next = 0;
  while (next < sample_times.size() && sample_times[next] == t0) {
    out.states.push_back(y0);
    ++next;
  }

  OdeStats local;
  const double tol = opts.tol;
  double t = t0;
  State y = y0;
  State k1 = f(t, y);
  ++local.evaluations;

  double h = opts.initial_step;
  if (h <= 0) {
    // Hairer's starting-step heuristic, first-order version.
    const auto sk = (tol + tol * y.cwiseAbs().array()).eval();
    const double d0 = std::sqrt((y.cwiseAbs().array() / sk).square().mean());
    const double d1 = std::sqrt((k1.cwiseAbs().array() / sk).square().mean());
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, t1 - t0);
  }

  constexpr double beta = 0.04;
  constexpr double expo1 = 0.2 - beta * 0.75;
  constexpr double safety = 0.9;
  double err_old = 1e-4;
  bool last_rejected = false;

  while (t < t1) {
    if (local.accepted + local.rejected >= opts.max_steps)
      throw StiffnessError("integrate_ode: exceeded " + std::to_string(opts.max_steps) + " steps");
    if (h < 1e-14 * std::max(std::abs(t), std::abs(t1 - t0)))
      throw StiffnessError("integrate_ode: step size underflow at t = " + std::to_string(t));
    if (t + h > t1) h = t1 - t;

    const State k2 = f(t + dp::c2 * h, (y + h * dp::a21 * k1).eval());
    const State k3 = f(t + dp::c3 * h, (y + h * (dp::a31 * k1 + dp::a32 * k2)).eval());
    const State k4 = f(t + dp::c4 * h, (y + h * (dp::a41 * k1 + dp::a42 * k2 + dp::a43 * k3)).eval());
    const State k5 = f(t + dp::c5 * h, (y + h * (dp::a51 * k1 + dp::a52 * k2 + dp::a53 * k3 +
                                                 dp::a54 * k4)).eval());
    const State k6 = f(t + h, (y + h * (dp::a61 * k1 + dp::a62 * k2 + dp::a63 * k3 +
                                        dp::a64 * k4 + dp::a65 * k5)).eval());
    const State y1 =
        (y + h * (dp::a71 * k1 + dp::a73 * k3 + dp::a74 * k4 + dp::a75 * k5 + dp::a76 * k6)).eval();
    const State k7 = f(t + h, y1);
    local.evaluations += 6;

    const State err =
        (h * (dp::e1 * k1 + dp::e3 * k3 + dp::e4 * k4 + dp::e5 * k5 + dp::e6 * k6 + dp::e7 * k7))
            .eval();
    const double err_norm = dp::error_norm(err, y, y1, tol);

    if (!std::isfinite(err_norm)) {
      ++local.rejected;
      h *= 0.1;
      last_rejected = true;
      continue;
    }

    if (err_norm <= 1.0) {
      const double t_new = (t + h >= t1) ? t1 : t + h;
      // Dense output on (t, t_new].
      if (next < sample_times.size() && sample_times[next] <= t_new) {
        const State r1 = y;
        const State r2 = (y1 - y).eval();
        const State r3 = (h * k1 - r2).eval();
        const State r4 = (r2 - h * k7 - r3).eval();
        const State r5 =
            (h * (dp::d1 * k1 + dp::d3 * k3 + dp::d4 * k4 + dp::d5 * k5 + dp::d6 * k6 + dp::d7 * k7))
                .eval();
        while (next < sample_times.size() && sample_times[next] <= t_new) {
          const double th = (sample_times[next] - t) / h;
          const double th1 = 1.0 - th;
          out.states.push_back((r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)))).eval());
          ++next;
        }
      }
      ++local.accepted;
      t = t_new;
      y = y1;
      k1 = k7;

      double fac = std::pow(err_norm, expo1) / std::pow(err_old, beta) / safety;
      fac = std::clamp(fac, 0.2, 10.0);
      double h_new = h / fac;
      if (last_rejected) h_new = std::min(h_new, h);
      err_old = std::max(err_norm, 1e-4);
      h = h_new;
      last_rejected = false;
    } else {
      ++local.rejected;
      const double fac = std::clamp(std::pow(err_norm, expo1) / safety, 1.0, 5.0);
      h /= fac;
      last_rejected = true;
    }
  }

  while (next < sample_times.size()) {
    out.states.push_back(y);
    ++next;
  }
  if (stats) *stats = local;
  return out;
}

/// Convenience overload returning only the state at t1.
template <typename State, typename Rhs>
State integrate_ode(Rhs&& f, const State& y0, double t0, double t1, const OdeOptions& opts) {
  const double end[1] = {t1};
  return integrate_ode(std::forward<Rhs>(f), y0, t0, t1, std::span<const double>(end), opts)
      .states.front();
}

}  // namespace sqz
