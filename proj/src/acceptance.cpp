#include "sqz/acceptance.hpp"

#include "sqz/blochdyn.hpp"
#include "sqz/estimation.hpp"
#include "sqz/master_equation.hpp"
#include "sqz/numerics/eigh.hpp"
#include "sqz/protocols.hpp"
#include "sqz/reservoir.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace sqz {
namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
  return out;
}

double ramsey_time(const DecayRates& r, double phi, double omega_mod, const std::vector<double>& times,
                   bool squeezing_on) {
  const RamseyTrace tr = ramsey(r, phi, omega_mod, times, squeezing_on);
  return fit_damped_sinusoid(tr.times, tr.sz, omega_mod).tau;
}

CriterionResult vacuum_limit(const AcceptanceParams& p) {
  const DecayRates r = DecayRates::from_times(p.t1, 0.0, 0.0, 0.0);
  const auto times = linspace(0.0, 5.0, 201);
  const double tx = ramsey_time(r, kPi / 2, p.omega_mod_mhz, times, false);
  const double ty = ramsey_time(r, kPi, p.omega_mod_mhz, times, false);
  const double worst = std::max(rel(tx, 2 * p.t1), rel(ty, 2 * p.t1));
  return {"1", "vacuum limit T2 = 2 T1", worst <= 1e-3,
          fmt("T2(x) = %.6f us, T2(y) = %.6f us, 2T1 = %.4f us, worst rel. dev. %.2e (limit 1e-3)", tx, ty,
              2 * p.t1, worst)};
}

CriterionResult t2_star(const AcceptanceParams& p) {
  const DecayRates r = DecayRates::from_times(p.t1, p.t_phi, p.n, p.m);
  const auto times = linspace(0.0, 5.0, 201);
  double lo = 1e300, hi = -1e300;
  for (double phi : {0.0, kPi / 4, kPi / 2, kPi}) {
    const double t = ramsey_time(r, phi, p.omega_mod_mhz, times, false);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  const double closed = 1.0 / (0.5 / p.t1 + 1.0 / p.t_phi);
  const bool in_interval = lo >= p.ref_t2_star - p.ref_t2_star_err && hi <= p.ref_t2_star + p.ref_t2_star_err;
  const bool uniform = rel(lo, closed) < 1e-6 && rel(hi, closed) < 1e-6;
  return {"2", "T2* with squeezing off", in_interval && uniform,
          fmt("fitted T2* in [%.6f, %.6f] us over phi, closed form %.6f us, reference %.2f(%.0f) us", lo, hi,
              closed, p.ref_t2_star, p.ref_t2_star_err * 100)};
}

CriterionResult squeezed_timescales(const AcceptanceParams& p) {
  const DecayRates r = DecayRates::from_times(p.t1, p.t_phi, p.n, p.m);
  const auto times = linspace(0.0, 5.0, 201);
  const double tx = ramsey_time(r, kPi / 2, p.omega_mod_mhz, times, true);
  const double ty = ramsey_time(r, kPi, p.omega_mod_mhz, times, true);
  const double txt = subtract_dephasing(tx, p.t_phi);
  const double tyt = subtract_dephasing(ty, p.t_phi);
  // One unit in the last quoted digit.
  const double digit_x = 0.1, digit_y = 0.01;
  const bool ok_tx = rel(tx, p.ref_tx) <= 0.02;
  const bool ok_ty = rel(ty, p.ref_ty) <= 0.02;
  const bool ok_txt = std::abs(txt - p.ref_tx_tilde) <= digit_x;
  const bool ok_tyt = std::abs(tyt - p.ref_ty_tilde) <= digit_y;
  return {"3", "squeezed axis timescales", ok_tx && ok_ty && ok_txt && ok_tyt,
          fmt("Tx = %.4f us vs %.2f (%+.1f%%, %s), Ty = %.4f us vs %.2f (%+.1f%%, %s), "
              "Tx~ = %.4f us vs %.1f (%s), Ty~ = %.4f us vs %.2f (%s)",
              tx, p.ref_tx, 100 * (tx / p.ref_tx - 1), ok_tx ? "ok" : "off", ty, p.ref_ty,
              100 * (ty / p.ref_ty - 1), ok_ty ? "ok" : "off", txt, p.ref_tx_tilde, ok_txt ? "ok" : "off", tyt,
              p.ref_ty_tilde, ok_tyt ? "ok" : "off")};
}

CriterionResult steady(const AcceptanceParams& p) {
  const DecayRates r = DecayRates::from_times(p.t1, p.t_phi, p.n, p.m);
  const BlochState ss = steady_state(r);
  const AxisTimescales ts = axis_timescales(r);
  const double t_long = 20.0 * std::max({ts.tx, ts.ty, ts.tz});
  const BlochState late = evolve(prepare(0.67 * kPi, 0.83 * kPi), r, t_long);
  const bool ok = rel(ss.sz, p.ref_sz) <= 0.01 && std::abs(late.sx) < 1e-6 && std::abs(late.sz - ss.sz) < 1e-6;
  return {"4", "steady state", ok,
          fmt("sz_ss = %.5f vs %.2f (%+.2f%%), after %.1f us: sx = %.1e, sz = %.6f", ss.sz, p.ref_sz,
              100 * (ss.sz / p.ref_sz - 1), t_long, late.sx, late.sz)};
}

// Envelope fit of the transverse length computed from the eigenvectors of the
// transverse generator (independent of the closed-form propagator).
double eigen_expansion_time(const DecayRates& r, double phi, const std::vector<double>& times) {
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(polarization_generator(r));
  const Eigen::Matrix2cd v = es.eigenvectors();
  const BlochState s0 = prepare(kPi / 2, phi);
  const Complex c0(s0.sx, s0.sy);
  const Eigen::Vector2cd coeff = v.partialPivLu().solve(Eigen::Vector2cd(0.5 * std::conj(c0), 0.5 * c0));
  std::vector<double> env;
  for (double t : times) {
    const Eigen::Vector2cd sig = v * (coeff.array() * (es.eigenvalues().array() * t).exp()).matrix();
    env.push_back(2.0 * std::abs(sig(1)));
  }
  return fit_exp(times, env, false).tau;
}

CriterionResult detuning(const AcceptanceParams& p) {
  // Pure dephasing off so the asymptote is exactly 2T1/(2N+1).
  const DecayRates r = DecayRates::from_times(p.t1, 0.0, p.n, p.m);
  std::vector<double> deltas;
  for (int k = -200; k <= 200; ++k) deltas.push_back(0.02 * k);
  const FitWindow window{0.0, 5.0, 201};
  const auto xs = detuning_sweep(r, deltas, kPi / 2, window, p.omega_mod_mhz);
  const auto ys = detuning_sweep(r, deltas, kPi, window, p.omega_mod_mhz);
  const std::size_t mid = deltas.size() / 2;

  bool all_ok = true;
  double asym = 0.0, worst_asym = 0.0, worst_asym_delta = 0.0, agree = 0.0;
  bool extrema = true;
  const double target = 2.0 * p.t1 / (2.0 * p.n + 1.0);
  const double threshold = 5.0 * r.gamma_m() / (2.0 * kPi);
  const auto times = window.samples();
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    for (const auto* pts : {&xs, &ys}) {
      const DetuningPoint& pt = (*pts)[k];
      const DetuningPoint& mirror = (*pts)[deltas.size() - 1 - k];
      all_ok = all_ok && pt.ok;
      if (!pt.ok) continue;
      asym = std::max(asym, rel(pt.t_eff, mirror.t_eff));
      if (std::abs(pt.delta_mhz) >= threshold - 1e-12) {
        const double d = rel(pt.t_eff, target);
        if (d > worst_asym) {
          worst_asym = d;
          worst_asym_delta = pt.delta_mhz;
        }
      }
      const double phi = pts == &xs ? kPi / 2 : kPi;
      agree = std::max(agree, rel(pt.t_eff, eigen_expansion_time(r.with_detuning(pt.delta_mhz), phi, times)));
    }
    extrema = extrema && xs[k].t_eff <= xs[mid].t_eff && ys[k].t_eff >= ys[mid].t_eff;
  }
  const double tx0 = xs[mid].t_eff;
  const bool ok_sym = asym <= 1e-6;
  const bool ok_tx0 = tx0 > 2 * p.t1;
  const bool ok_asym = worst_asym <= 0.02;
  const bool ok_agree = agree <= 1e-6;
  return {"5", "detuning sweep", all_ok && ok_sym && extrema && ok_tx0 && ok_asym && ok_agree,
          fmt("symmetry %.1e (%s), extrema at 0 (%s), Tx(0) = %.4f us > 2T1 (%s), "
              "asymptote %.4f us: worst dev. %.2f%% at %+.2f MHz for |delta| >= %.3f MHz (%s), "
              "eigen-expansion agreement %.1e (%s)",
              asym, ok_sym ? "ok" : "off", extrema ? "ok" : "off", tx0, ok_tx0 ? "ok" : "off", target,
              100 * worst_asym, worst_asym_delta, threshold, ok_asym ? "ok" : "off", agree,
              ok_agree ? "ok" : "off")};
}

CriterionResult polariton_spectrum(const AcceptanceParams& p) {
  const PolaritonSystem ps = diagonalize_polaritons(build_hamiltonian(p.transmon), p.transmon);
  const double wq = ps.transition_ghz(0, ps.index_of("-"));
  const double split = 1e3 * ps.transition_ghz(ps.index_of("-"), ps.index_of("+"));
  const bool ok = std::abs(wq - p.ref_qubit_ghz) <= 0.015 && std::abs(split - p.ref_splitting_mhz) <= 10.0;
  return {"6", "polariton spectrum", ok,
          fmt("g->- = %.5f GHz vs %.4f (%+.1f MHz), splitting %.2f MHz vs %.0f", wq, p.ref_qubit_ghz,
              1e3 * (wq - p.ref_qubit_ghz), split, p.ref_splitting_mhz)};
}

CriterionResult master_equation_reduction(const AcceptanceParams& p) {
  const PolaritonSystem ps = diagonalize_polaritons(build_hamiltonian(p.transmon), p.transmon);
  const Eigen::Index lo = 0, up = ps.index_of("-");
  const double gamma_base = 1.0 / (p.t1 * std::norm(ps.a(lo, up)));
  const SqueezedReservoir res(p.n, p.m, ps.transition_ghz(lo, up), p.bandwidth_mhz);
  const DecayRates rates = two_level_reduction(ps, gamma_base, res, 0.0, {lo, up});
  const MasterEquationRHS rhs = master_equation_rhs(ps, res, uniform_rates(ps.dimension(), gamma_base));

  const BlochState s0 = prepare(0.67 * kPi, 0.83 * kPi);
  const auto times = linspace(0.0, 5.0, 101);
  OdeOptions opts;
  opts.tol = 1e-10;
  const auto rhos = evolve_master_equation(rhs, density_from_bloch(ps.dimension(), lo, up, s0.vec()), times, opts);
  double worst = 0.0, leak = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Eigen::Vector3d b = bloch_components(rhos[k], lo, up);
    worst = std::max(worst, (b - evolve(s0, rates, times[k]).vec()).cwiseAbs().maxCoeff());
    leak = std::max(leak, std::abs(1.0 - (rhos[k](lo, lo) + rhos[k](up, up)).real()));
  }
  return {"7", "master-equation two-level reduction", worst <= 1e-6,
          fmt("dimension %ld, %zu dissipator terms, max Bloch deviation %.2e over 5 us (limit 1e-6), "
              "population outside {g,-} %.1e",
              static_cast<long>(ps.dimension()), rhs.terms.size(), worst, leak)};
}

CriterionResult attenuation(const AcceptanceParams& p) {
  const double eta = infer_eta(p.n, p.m);
  const double curve = eta_curve(p.n, p.eta);
  const bool ok = eta >= 0.40 && eta <= 0.50 && std::abs(curve - p.ref_m_minus_n) <= 0.03;
  return {"8", "attenuation and moments", ok,
          fmt("inferred eta = %.4f (window [0.40, 0.50]), eta = %.1f curve at N = %.2f gives M-N = %.4f vs %.2f",
              eta, p.eta, p.n, curve, p.ref_m_minus_n)};
}

CriterionResult thermal(const AcceptanceParams& p) {
  const double n_th = thermal_from_population(p.p_excited);
  // Decay times of a qubit in a purely thermal bath: Tz = T1 and Tx~ = 2 T1.
  const MomentEstimate me = moments_from_decays(p.t1, p.t1, 2 * p.t1, n_th);
  const bool ok = n_th <= p.ref_n_th_max && std::abs(n_th - 0.0187) < 5e-5 &&
                  me.t1_intrinsic <= p.ref_t1_int_max && std::abs(me.n) < 1e-12;
  return {"9", "thermal calibration", ok,
          fmt("p_e = %.3f -> N_th = %.6f (<= %.3f), T1_int = %.5f us (<= %.3f), corrected N = %.1e", p.p_excited,
              n_th, p.ref_n_th_max, me.t1_intrinsic, p.ref_t1_int_max, me.n)};
}

CriterionResult properties(const AcceptanceParams& p) {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::string> failed;

  // Estimation round trip.
  double worst_rt = 0.0;
  const auto times = linspace(0.0, 8.0, 321);
  for (int trial = 0; trial < 25; ++trial) {
    const double n = 3.0 * u(rng);
    const double m = ideal_M(n) * u(rng);
    const double t1 = 0.3 + 0.7 * u(rng);
    const double t_phi = trial % 3 == 0 ? 0.0 : 5.0 + 15.0 * u(rng);
    const DecayRates r = DecayRates::from_times(t1, t_phi, n, m);
    DecayTraces tr;
    tr.omega_mod_mhz = p.omega_mod_mhz;
    tr.ramsey_x = {times, ramsey(r, kPi / 2, p.omega_mod_mhz, times).sz, "x"};
    tr.ramsey_y = {times, ramsey(r, kPi, p.omega_mod_mhz, times).sz, "y"};
    tr.relaxation = {times, relaxation_trace(r, times), "z"};
    tr.ramsey_vacuum = {times, ramsey(r, kPi / 2, p.omega_mod_mhz, times, false).sz, "vac"};
    const DecayEstimate d = estimate_decays(tr);
    const MomentEstimate me = moments_from_decays(t1, d.tz, subtract_dephasing(d.tx, t_phi));
    worst_rt = std::max({worst_rt, std::abs(me.n - n) / std::max(n, 1e-2), std::abs(me.m - m) / std::max(m, 1e-2)});
  }
  if (worst_rt > 1e-3) failed.push_back("round trip");

  // Trace and Hermiticity preservation of the master equation.
  const PolaritonSystem ps = diagonalize_polaritons(build_hamiltonian(p.transmon), p.transmon);
  const SqueezedReservoir res(p.n, p.m, ps.transition_ghz(0, 1), p.bandwidth_mhz);
  const MasterEquationRHS rhs = master_equation_rhs(ps, res, uniform_rates(ps.dimension(), 2.0));
  double worst_tr = 0.0, worst_herm = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    ComplexMatrix a(ps.dimension(), ps.dimension());
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Complex(u(rng) - 0.5, u(rng) - 0.5);
    ComplexMatrix rho = a * a.adjoint();
    rho /= rho.trace();
    const ComplexMatrix d = apply(rhs, rho, 3.0 * u(rng));
    worst_tr = std::max(worst_tr, std::abs(d.trace()) / rho.norm());
    worst_herm = std::max(worst_herm, max_abs((d - d.adjoint()).eval()) / std::max(max_abs(d), 1e-300));
  }
  if (worst_tr > 1e-12) failed.push_back("trace");
  if (worst_herm > 1e-12) failed.push_back("hermiticity");

  // Propagator semigroup.
  double worst_sg = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double n = 2.0 * u(rng);
    DecayRates r{0.5 + 2.0 * u(rng), 0.3 * u(rng), n, ideal_M(n) * u(rng), 4.0 * (u(rng) - 0.5)};
    const double t1 = 2.0 * u(rng), t2 = 2.0 * u(rng);
    const Eigen::Matrix2cd diff =
        polarization_propagator(r, t1 + t2) - polarization_propagator(r, t2) * polarization_propagator(r, t1);
    worst_sg = std::max(worst_sg, diff.cwiseAbs().maxCoeff());
  }
  if (worst_sg > 1e-10) failed.push_back("semigroup");

  // Eigensolver reconstruction.
  double worst_eig = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 2 + trial;
    ComplexMatrix a(dim, dim);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = Complex(u(rng) - 0.5, u(rng) - 0.5);
    const ComplexMatrix h = a + a.adjoint();
    const auto e = eigh(h);
    const ComplexMatrix eye = ComplexMatrix::Identity(dim, dim);
    worst_eig = std::max({worst_eig, (e.reconstruct() - h).norm() / h.norm(),
                          (e.eigenvectors.adjoint() * e.eigenvectors - eye).norm()});
  }
  if (worst_eig > 1e-9) failed.push_back("eigh");

  // Fit round trips.
  double worst_fit = 0.0;
  const auto ft = linspace(0.0, 6.0, 121);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = 0.5 + u(rng), tau = 0.3 + 2.0 * u(rng), c = u(rng) - 0.5, ph = 2 * kPi * (u(rng) - 0.5);
    std::vector<double> ye, ys;
    for (double t : ft) {
      ye.push_back(a * std::exp(-t / tau) + c);
      ys.push_back(a * std::exp(-t / tau) * std::sin(ph - 2 * kPi * p.omega_mod_mhz * t) + c);
    }
    const ExpFit fe = fit_exp(ft, ye);
    const SinusoidFit fs = fit_damped_sinusoid(ft, ys, p.omega_mod_mhz);
    worst_fit = std::max({worst_fit, rel(fe.tau, tau), rel(fe.amplitude, a), rel(fs.tau, tau),
                          rel(fs.amplitude, a), std::abs(std::remainder(fs.phase - ph, 2 * kPi))});
  }
  if (worst_fit > 1e-6) failed.push_back("fits");

  std::string which;
  for (const auto& f : failed) which += (which.empty() ? "" : ", ") + f;
  return {"10", "property suites", failed.empty(),
          fmt("round trip %.1e, trace %.1e, hermiticity %.1e, semigroup %.1e, eigh %.1e, fits %.1e%s%s", worst_rt,
              worst_tr, worst_herm, worst_sg, worst_eig, worst_fit, failed.empty() ? "" : "; failed: ",
              which.c_str())};
}

CriterionResult drive_linearity(const AcceptanceParams& p) {
  const DecayRates r = DecayRates::from_times(p.t1, p.t_phi, p.n, p.m);
  double ratio0 = 0.0, worst = 0.0, sy10 = 0.0;
  for (double khz : {1.0, 2.0, 5.0, 10.0, 15.0, 20.0}) {
    const double omega = 2 * kPi * khz * 1e-3;
    const BlochState s = steady_state(r, Eigen::Vector3d(omega, 0.0, 0.0));
    const double ratio = s.sy / omega;
    if (ratio0 == 0.0) ratio0 = ratio;
    worst = std::max(worst, rel(ratio, ratio0));
    if (khz == 10.0) sy10 = s.sy;
  }
  return {"11", "drive-induced coherence is linear in the Rabi rate", worst <= 0.01,
          fmt("sy_ss / Omega constant to %.2e over 1-20 kHz (limit 1e-2); at 10 kHz sy_ss = %.4f, Omega T1 = %.4f",
              worst, sy10, 2 * kPi * 0.01 * p.t1)};
}

template <typename F>
CriterionResult guarded(const char* id, const char* title, F&& f, const AcceptanceParams& p) {
  try {
    return f(p);
  } catch (const std::exception& e) {
    return {id, title, false, std::string("error: ") + e.what()};
  }
}

}  // namespace

AcceptanceParams acceptance_params(const RunConfig& cfg) {
  AcceptanceParams p;
  p.t1 = cfg.t1_us;
  p.t_phi = cfg.t_phi_us;
  p.n = cfg.reservoir.n;
  p.m = cfg.reservoir.m;
  p.eta = cfg.reservoir.eta;
  p.bandwidth_mhz = cfg.reservoir.bandwidth_mhz;
  p.omega_mod_mhz = cfg.protocol.omega_mod_mhz;
  if (cfg.reservoir.p_excited) p.p_excited = *cfg.reservoir.p_excited;
  if (cfg.transmon) p.transmon = cfg.transmon->params;
  return p;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceParams& p) {
  return {
      guarded("1", "vacuum limit T2 = 2 T1", vacuum_limit, p),
      guarded("2", "T2* with squeezing off", t2_star, p),
      guarded("3", "squeezed axis timescales", squeezed_timescales, p),
      guarded("4", "steady state", steady, p),
      guarded("5", "detuning sweep", detuning, p),
      guarded("6", "polariton spectrum", polariton_spectrum, p),
      guarded("7", "master-equation two-level reduction", master_equation_reduction, p),
      guarded("8", "attenuation and moments", attenuation, p),
      guarded("9", "thermal calibration", thermal, p),
      guarded("10", "property suites", properties, p),
      guarded("11", "drive-induced coherence is linear in the Rabi rate", drive_linearity, p),
  };
}

int print_acceptance(std::ostream& os, const std::vector<CriterionResult>& results) {
  int failures = 0;
  for (const CriterionResult& r : results) {
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.title << ": " << r.detail << '\n';
    failures += r.passed ? 0 : 1;
  }
  os << failures << " of " << results.size() << " criteria failed\n";
  return failures;
}

}  // namespace sqz
