#include "sqz/cli.hpp"

#include "sqz/acceptance.hpp"
#include "sqz/config.hpp"
#include "sqz/estimation.hpp"
#include "sqz/io.hpp"
#include "sqz/polariton.hpp"
#include "sqz/protocols.hpp"
#include "sqz/reservoir.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>

namespace sqz::cli {
namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

struct Options {
  std::string config;
  std::string out_dir = ".";
  std::string format = "csv";
  long seed = 0;  // reserved; every pipeline is deterministic
  std::string traces_dir;
};

class Outputs {
 public:
  Outputs(const Options& opts, std::ostream& log) : dir_(opts.out_dir), format_(opts.format), log_(log) {
    fs::create_directories(dir_);
  }
  bool csv() const { return format_ != "json"; }
  bool json() const { return format_ != "csv"; }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const fs::path path = dir_ / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("output: cannot write " + path.string());
    body(os);
    if (!os) throw Error("output: write failed for " + path.string());
    log_ << "wrote " << path.string() << '\n';
  }
  void write_text(const std::string& name, const std::string& text) {
    write(name, [&](std::ostream& os) { os << text; });
  }

 private:
  fs::path dir_;
  std::string format_;
  std::ostream& log_;
};

RunConfig need_config(const Options& o) {
  if (o.config.empty()) throw ConfigError("config: --config is required for this command");
  return load_config(o.config);
}

PolaritonSystem polaritons(const RunConfig& cfg) {
  if (!cfg.transmon) throw ConfigError("config: the polariton command needs a [transmon] section");
  const TransmonCavityParams& p = cfg.transmon->params;
  return diagonalize_polaritons(build_hamiltonian(p), p);
}

int cmd_polariton(const Options& o, std::ostream& out) {
  const RunConfig cfg = need_config(o);
  for (const auto& w : cfg.transmon ? cfg.transmon->params.warnings() : std::vector<std::string>{})
    out << "warning: " << w << '\n';
  const PolaritonSystem ps = polaritons(cfg);
  Outputs files(o, out);
  const double wq = ps.transition_ghz(0, ps.index_of("-"));
  const double split = 1e3 * ps.transition_ghz(ps.index_of("-"), ps.index_of("+"));
  out << "g->- " << io::format_number(wq) << " GHz, g->+ "
      << io::format_number(ps.transition_ghz(0, ps.index_of("+"))) << " GHz, splitting "
      << io::format_number(split) << " MHz\n";
  if (files.json()) files.write_text("polariton.json", io::polariton_json(ps));
  if (files.csv()) {
    files.write("polariton_levels.csv", [&](std::ostream& os) {
      os << "#schema=polariton-levels/1\n";
      os << "index,label,excitations,energy_ghz,abs_A_from_ground\n";
      for (Eigen::Index i = 0; i < ps.dimension(); ++i)
        os << i << ',' << ps.labels[static_cast<std::size_t>(i)] << ',' << ps.excitations[static_cast<std::size_t>(i)]
           << ',' << io::format_number(ps.energies(i)) << ',' << io::format_number(std::abs(ps.a(0, i))) << '\n';
    });
  }
  return kOk;
}

int cmd_ramsey(const Options& o, std::ostream& out) {
  const RunConfig cfg = need_config(o);
  const DecayRates r = resolve_rates(cfg);
  std::vector<RamseyTrace> traces;
  for (bool on : {true, false})
    for (double phi : cfg.protocol.phi)
      traces.push_back(ramsey(r, phi, cfg.protocol.omega_mod_mhz, cfg.protocol.times_us, on));
  Outputs files(o, out);
  if (files.csv()) files.write("ramsey.csv", [&](std::ostream& os) { io::write_ramsey_csv(os, traces); });
  if (files.json()) files.write_text("ramsey.json", io::ramsey_json(traces));
  for (const RamseyTrace& tr : traces) {
    const SinusoidFit f = fit_damped_sinusoid(tr.times, tr.sz, tr.omega_mod_mhz);
    out << "phi/pi = " << io::format_number(tr.phi / kPi) << (tr.squeezing_on ? " squeezed" : " vacuum  ")
        << " T = " << io::format_number(f.tau) << " us\n";
  }
  return kOk;
}

int cmd_trajectory(const Options& o, std::ostream& out) {
  const RunConfig cfg = need_config(o);
  const DecayRates r = resolve_rates(cfg);
  const auto& p = cfg.protocol;
  BlochTrajectory traj;
  if (p.drive_khz > 0) {
    const Eigen::Vector3d drive(2 * kPi * p.drive_khz * 1e-3, 0.0, 0.0);
    traj = driven_trajectory(r, p.prep_theta, p.prep_phi, drive, p.times_us);
  } else {
    traj = tomography_trajectory(r, p.prep_theta, p.prep_phi, p.times_us);
  }
  Outputs files(o, out);
  if (files.csv()) files.write("trajectory.csv", [&](std::ostream& os) { io::write_trajectory_csv(os, traj); });
  if (files.json()) {
    const BlochState& last = traj.states.back();
    files.write_text("trajectory.json", "{\n  \"final\": [" + io::format_number(last.sx) + ", " +
                                            io::format_number(last.sy) + ", " + io::format_number(last.sz) +
                                            "]\n}\n");
  }
  return kOk;
}

int cmd_wigner(const Options& o, std::ostream& out) {
  const RunConfig cfg = need_config(o);
  const SqueezedReservoir res = resolve_reservoir(cfg, cfg.reservoir.center_ghz.value_or(0.0));
  const QuadratureVariances v = variances(res);
  const WignerGrid w = wigner(v, GridSpec::covering(v, cfg.wigner.n_std, cfg.wigner.points));
  out << "sigma_I^2 = " << io::format_number(v.sigma_i_sq) << ", sigma_Q^2 = " << io::format_number(v.sigma_q_sq)
      << ", integral = " << io::format_number(w.integral()) << '\n';
  Outputs files(o, out);
  files.write("wigner.csv", [&](std::ostream& os) { io::write_wigner_csv(os, w); });
  return kOk;
}

int cmd_sweep_detuning(const Options& o, std::ostream& out) {
  const RunConfig cfg = need_config(o);
  const DecayRates r = resolve_rates(cfg);
  const auto& t = cfg.protocol.times_us;
  const FitWindow window{t.front(), t.back(), static_cast<int>(t.size())};
  const auto xs = detuning_sweep(r, cfg.protocol.delta_mhz, kPi / 2, window, cfg.protocol.omega_mod_mhz);
  const auto ys = detuning_sweep(r, cfg.protocol.delta_mhz, kPi, window, cfg.protocol.omega_mod_mhz);
  int failures = 0;
  for (const auto* pts : {&xs, &ys})
    for (const DetuningPoint& p : *pts)
      if (!p.ok) {
        ++failures;
        out << "fit failed at delta = " << io::format_number(p.delta_mhz) << " MHz: " << p.error << '\n';
      }
  Outputs files(o, out);
  if (files.csv()) files.write("detuning.csv", [&](std::ostream& os) { io::write_detuning_csv(os, xs, ys); });
  if (files.json()) files.write_text("detuning.json", io::detuning_json(xs, ys));
  out << xs.size() << " detunings, " << failures << " failed fits\n";
  return kOk;
}

int cmd_sweep_gain(const Options& o, std::ostream& out) {
  const RunConfig cfg = need_config(o);
  const auto rows = gain_sweep(cfg.protocol.n_values, cfg.reservoir.eta, cfg.t1_us, cfg.t_phi_us);
  const auto ideal = gain_sweep(cfg.protocol.n_values, 1.0, cfg.t1_us, cfg.t_phi_us);
  Outputs files(o, out);
  if (files.csv()) {
    files.write("gain.csv", [&](std::ostream& os) { io::write_gain_csv(os, rows); });
    files.write("gain_ideal.csv", [&](std::ostream& os) { io::write_gain_csv(os, ideal); });
  }
  if (files.json()) files.write_text("gain.json", io::gain_json(rows, cfg.reservoir.eta));
  return kOk;
}

Trace load_trace(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open trace file " + path.string());
  try {
    return io::read_trace_csv(in, path.filename().string());
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

int cmd_estimate(const Options& o, std::ostream& out) {
  const RunConfig cfg = need_config(o);
  Outputs files(o, out);
  DecayTraces tr;
  tr.omega_mod_mhz = cfg.protocol.omega_mod_mhz;
  if (!o.traces_dir.empty()) {
    const fs::path d(o.traces_dir);
    tr.ramsey_x = load_trace(d / "ramsey_x.csv");
    tr.ramsey_y = load_trace(d / "ramsey_y.csv");
    tr.relaxation = load_trace(d / "relaxation.csv");
    tr.ramsey_vacuum = load_trace(d / "ramsey_vacuum.csv");
  } else {
    const DecayRates r = resolve_rates(cfg);
    const auto& t = cfg.protocol.times_us;
    tr.ramsey_x = {t, ramsey(r, kPi / 2, tr.omega_mod_mhz, t).sz, "ramsey_x.csv"};
    tr.ramsey_y = {t, ramsey(r, kPi, tr.omega_mod_mhz, t).sz, "ramsey_y.csv"};
    tr.relaxation = {t, relaxation_trace(r, t), "relaxation.csv"};
    tr.ramsey_vacuum = {t, ramsey(r, kPi / 2, tr.omega_mod_mhz, t, false).sz, "ramsey_vacuum.csv"};
    if (files.csv())
      for (const Trace* x : {&tr.ramsey_x, &tr.ramsey_y, &tr.relaxation, &tr.ramsey_vacuum})
        files.write(x->source, [&](std::ostream& os) { io::write_trace_csv(os, *x); });
  }
  const DecayEstimate d = estimate_decays(tr);
  const double tx_tilde = subtract_dephasing(d.tx, cfg.t_phi_us);
  const MomentEstimate me = moments_from_decays(cfg.t1_us, d.tz, tx_tilde, cfg.reservoir.n_th);
  out << "Tx = " << io::format_number(d.tx) << " us, Ty = " << io::format_number(d.ty)
      << " us, Tz = " << io::format_number(d.tz) << " us, T2* = " << io::format_number(d.t2_star) << " us\n";
  out << "N = " << io::format_number(me.n) << " (uncorrected " << io::format_number(me.n_uncorrected)
      << "), M = " << io::format_number(me.m);
  if (me.eta) out << ", eta = " << io::format_number(*me.eta);
  out << '\n';
  for (const auto& w : me.warnings) out << "warning: " << w << '\n';
  files.write_text("moments.json", io::moments_json(me, &d));
  if (files.csv()) {
    const QuadratureVariances v{2.0 * (me.n + std::abs(me.m) + 0.5), 2.0 * (me.n - std::abs(me.m) + 0.5)};
    const WignerGrid w = reconstruct_wigner(me, GridSpec::covering(v, cfg.wigner.n_std, cfg.wigner.points));
    files.write("wigner_estimate.csv", [&](std::ostream& os) { io::write_wigner_csv(os, w); });
  }
  return kOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
  AcceptanceParams p;
  if (!o.config.empty()) p = acceptance_params(load_config(o.config));
  const int failures = print_acceptance(out, run_acceptance(p));
  return failures == 0 ? kOk : kValidationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-level atom decay in squeezed vacuum: simulation and estimation", "sqzvac"};
  app.require_subcommand(1);
  Options opts;

  using Handler = int (*)(const Options&, std::ostream&);
  const std::vector<std::tuple<const char*, const char*, Handler>> commands = {
      {"polariton", "dressed transmon-cavity spectrum and transition elements", cmd_polariton},
      {"ramsey", "Ramsey traces versus preparation angle, squeezing on and off", cmd_ramsey},
      {"trajectory", "Bloch trajectory of the configured preparation", cmd_trajectory},
      {"wigner", "Wigner distribution of the configured reservoir", cmd_wigner},
      {"sweep-detuning", "effective decay constants versus squeezing detuning", cmd_sweep_detuning},
      {"sweep-gain", "axis timescales along the attenuated-source curve", cmd_sweep_gain},
      {"estimate", "decay constants, N, M and eta from traces", cmd_estimate},
      {"validate", "run the acceptance checks", cmd_validate},
  };
  std::vector<std::pair<CLI::App*, Handler>> subs;
  for (const auto& [name, help, handler] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config, "configuration file (INI)");
    sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    sub->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();
    sub->add_option("--seed", opts.seed, "reserved; outputs do not depend on it");
    if (std::string(name) == "estimate")
      sub->add_option("--traces", opts.traces_dir,
                      "directory with ramsey_x.csv, ramsey_y.csv, relaxation.csv, ramsey_vacuum.csv");
    subs.emplace_back(sub, handler);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  for (const auto& [sub, handler] : subs) {
    if (!sub->parsed()) continue;
    try {
      return handler(opts, out);
    } catch (const ConfigError& e) {
      err << e.what() << '\n';
      return kConfigError;
    } catch (const Error& e) {
      err << e.what() << '\n';
      return kNumericalError;
    } catch (const fs::filesystem_error& e) {
      err << "output: " << e.what() << '\n';
      return kNumericalError;
    }
  }
  return kConfigError;
}

}  // namespace sqz::cli
