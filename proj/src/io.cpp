#include "sqz/io.hpp"

#include "sqz/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace sqz::io {
namespace {

using nlohmann::ordered_json;

// Numbers go through the same 9-digit rounding as the CSV files; non-finite
// values become null.
ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_number(v));
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << format_number(v);
    first = false;
  }
  os << '\n';
}

ordered_json sweep_points(std::span<const DetuningPoint> pts) {
  ordered_json arr = ordered_json::array();
  for (const DetuningPoint& p : pts) {
    ordered_json j;
    j["delta_mhz"] = num(p.delta_mhz);
    j["t_eff_us"] = p.ok ? num(p.t_eff) : nullptr;
    j["t_eff_err_us"] = p.ok ? num(p.t_eff_err) : nullptr;
    j["fast_eigen_time_us"] = num(p.fast_eigen_time);
    j["slow_eigen_time_us"] = num(p.slow_eigen_time);
    if (!p.ok) j["error"] = p.error;
    arr.push_back(j);
  }
  return arr;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_wigner_csv(std::ostream& os, const WignerGrid& w) {
  os << "#schema=wigner/1 rows=I cols=Q\n";
  os << "I\\Q";
  for (Eigen::Index c = 0; c < w.q_axis.size(); ++c) os << ',' << format_number(w.q_axis(c));
  os << '\n';
  for (Eigen::Index r = 0; r < w.i_axis.size(); ++r) {
    os << format_number(w.i_axis(r));
    for (Eigen::Index c = 0; c < w.q_axis.size(); ++c) os << ',' << format_number(w.values(r, c));
    os << '\n';
  }
}

void write_ramsey_csv(std::ostream& os, std::span<const RamseyTrace> traces) {
  os << "#schema=ramsey/1\n";
  os << "phi_rad,squeezing_on,t_us,sz,quadrature\n";
  for (const RamseyTrace& tr : traces)
    for (std::size_t k = 0; k < tr.times.size(); ++k)
      row(os, {tr.phi, tr.squeezing_on ? 1.0 : 0.0, tr.times[k], tr.sz[k], tr.quadrature[k]});
}

void write_trajectory_csv(std::ostream& os, const BlochTrajectory& traj) {
  os << "#schema=trajectory/1 theta=" << format_number(traj.theta) << " phi=" << format_number(traj.phi)
     << '\n';
  os << "t_us,sx,sy,sz\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const BlochState& s = traj.states[k];
    row(os, {traj.times[k], s.sx, s.sy, s.sz});
  }
}

void write_detuning_csv(std::ostream& os, std::span<const DetuningPoint> x_axis,
                        std::span<const DetuningPoint> y_axis) {
  os << "#schema=detuning-sweep/1\n";
  os << "axis,delta_mhz,t_eff_us,t_eff_err_us,fast_eigen_time_us,slow_eigen_time_us,ok\n";
  const auto emit = [&os](char axis, std::span<const DetuningPoint> pts) {
    for (const DetuningPoint& p : pts) {
      os << axis << ',';
      const double nan = std::nan("");
      row(os, {p.delta_mhz, p.ok ? p.t_eff : nan, p.ok ? p.t_eff_err : nan, p.fast_eigen_time,
               p.slow_eigen_time, p.ok ? 1.0 : 0.0});
    }
  };
  emit('x', x_axis);
  emit('y', y_axis);
}

void write_gain_csv(std::ostream& os, std::span<const GainRow> rows) {
  os << "#schema=gain-sweep/1\n";
  os << "N,M,Tx_us,Ty_us,Tz_us,Tx_tilde_us,Ty_tilde_us,M_minus_N\n";
  for (const GainRow& g : rows) row(os, {g.n, g.m, g.tx, g.ty, g.tz, g.tx_tilde, g.ty_tilde, g.m_minus_n});
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << "#schema=trace/1 source=" << trace.source << '\n';
  os << "t_us,value\n";
  for (std::size_t k = 0; k < trace.times.size(); ++k) row(os, {trace.times[k], trace.values[k]});
}

Trace read_trace_csv(std::istream& is, const std::string& source) {
  Trace out;
  out.source = source;
  std::string line;
  int lineno = 0;
  bool header_allowed = true;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a, b;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ','))
      throw InvalidInput("read_trace_csv: " + source + ":" + std::to_string(lineno) + ": expected two columns");
    try {
      const double t = std::stod(a);
      const double v = std::stod(b);
      out.times.push_back(t);
      out.values.push_back(v);
    } catch (const std::exception&) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw InvalidInput("read_trace_csv: " + source + ":" + std::to_string(lineno) + ": not a number");
    }
    header_allowed = false;
  }
  if (out.times.empty()) throw InvalidInput("read_trace_csv: " + source + ": no samples");
  return out;
}

std::string polariton_json(const PolaritonSystem& ps) {
  ordered_json j;
  j["n_transmon"] = ps.n_transmon;
  j["n_photon"] = ps.n_photon;
  j["labels"] = ps.labels;
  ordered_json energies = ordered_json::array();
  for (Eigen::Index i = 0; i < ps.dimension(); ++i) energies.push_back(num(ps.energies(i)));
  j["energies_ghz"] = energies;
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < ps.dimension(); ++i) {
    ordered_json r = ordered_json::array();
    for (Eigen::Index k = 0; k < ps.dimension(); ++k) r.push_back(num(std::abs(ps.a(i, k))));
    a.push_back(r);
  }
  j["abs_A"] = a;
  const Eigen::Index minus = ps.index_of("-");
  const Eigen::Index plus = ps.index_of("+");
  j["g_to_minus_ghz"] = num(ps.transition_ghz(0, minus));
  j["g_to_plus_ghz"] = num(ps.transition_ghz(0, plus));
  j["splitting_mhz"] = num(1e3 * (ps.energies(plus) - ps.energies(minus)));
  return dump(j);
}

std::string moments_json(const MomentEstimate& me, const DecayEstimate* decays) {
  ordered_json j;
  if (decays) {
    j["decays_us"] = {{"Tx", num(decays->tx)}, {"Ty", num(decays->ty)},
                      {"Tz", num(decays->tz)}, {"T2_star", num(decays->t2_star)}};
    j["decay_errors_us"] = {{"Tx", num(decays->tx_err)}, {"Ty", num(decays->ty_err)},
                            {"Tz", num(decays->tz_err)}, {"T2_star", num(decays->t2_star_err)}};
    j["sources"] = decays->sources;
  }
  j["N"] = num(me.n);
  j["N_uncorrected"] = num(me.n_uncorrected);
  j["M"] = num(me.m);
  j["N_th"] = num(me.n_th);
  j["T1_intrinsic_us"] = num(me.t1_intrinsic);
  j["eta"] = me.eta ? num(*me.eta) : ordered_json(nullptr);
  j["warnings"] = me.warnings;
  return dump(j);
}

std::string ramsey_json(std::span<const RamseyTrace> traces) {
  ordered_json arr = ordered_json::array();
  for (const RamseyTrace& tr : traces) {
    ordered_json j;
    j["phi_rad"] = num(tr.phi);
    j["squeezing_on"] = tr.squeezing_on;
    j["omega_mod_mhz"] = num(tr.omega_mod_mhz);
    try {
      const SinusoidFit f = fit_damped_sinusoid(tr.times, tr.sz, tr.omega_mod_mhz);
      j["fit"] = {{"amplitude", num(f.amplitude)}, {"tau_us", num(f.tau)}, {"tau_err_us", num(f.tau_err)},
                  {"phase_rad", num(f.phase)}, {"offset", num(f.offset)}};
    } catch (const Error& e) {
      j["fit"] = nullptr;
      j["fit_error"] = e.what();
    }
    arr.push_back(j);
  }
  ordered_json out;
  out["traces"] = arr;
  return dump(out);
}

std::string detuning_json(std::span<const DetuningPoint> x_axis, std::span<const DetuningPoint> y_axis) {
  ordered_json j;
  j["x"] = sweep_points(x_axis);
  j["y"] = sweep_points(y_axis);
  return dump(j);
}

std::string gain_json(std::span<const GainRow> rows, double eta) {
  ordered_json arr = ordered_json::array();
  for (const GainRow& g : rows) {
    arr.push_back({{"N", num(g.n)}, {"M", num(g.m)}, {"Tx_us", num(g.tx)}, {"Ty_us", num(g.ty)},
                   {"Tz_us", num(g.tz)}, {"Tx_tilde_us", num(g.tx_tilde)},
                   {"Ty_tilde_us", num(g.ty_tilde)}, {"M_minus_N", num(g.m_minus_n)}});
  }
  ordered_json j;
  j["eta"] = num(eta);
  j["rows"] = arr;
  return dump(j);
}

}  // namespace sqz::io
