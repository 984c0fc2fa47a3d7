#include "sqz/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

namespace sqz {
namespace {

namespace pt = boost::property_tree;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config: " + field + ": " + what);
}

double to_double(const std::string& text, const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(field, "'" + text + "' is not a number");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) fail(field, "'" + text + "' is not a number");
  if (!std::isfinite(v)) fail(field, "value must be finite");
  return v;
}

class Section {
 public:
  Section(const pt::ptree& tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  std::string field(const std::string& key) const { return "[" + name_ + "] " + key; }

  std::optional<std::string> text(const std::string& key) const {
    if (auto v = tree_.get_optional<std::string>(key)) return *v;
    return std::nullopt;
  }
  double number(const std::string& key) const {
    auto v = text(key);
    if (!v) fail(field(key), "required key is missing");
    return to_double(*v, field(key));
  }
  double number(const std::string& key, double fallback) const {
    auto v = text(key);
    return v ? to_double(*v, field(key)) : fallback;
  }
  std::optional<double> maybe(const std::string& key) const {
    auto v = text(key);
    if (!v) return std::nullopt;
    return to_double(*v, field(key));
  }
  int integer(const std::string& key, int fallback) const {
    auto v = text(key);
    if (!v) return fallback;
    const double d = to_double(*v, field(key));
    if (d != std::floor(d) || std::abs(d) > 1e6) fail(field(key), "expected an integer");
    return static_cast<int>(d);
  }
  std::vector<double> grid(const std::string& key, const std::string& fallback) const {
    return parse_grid(text(key).value_or(fallback), field(key));
  }

  void reject_unknown(std::initializer_list<const char*> known) const {
    for (const auto& [key, child] : tree_) {
      bool ok = false;
      for (const char* k : known) ok = ok || key == k;
      if (!ok) fail(field(key), "unknown key");
    }
  }

 private:
  const pt::ptree& tree_;
  std::string name_;
};

const pt::ptree kEmpty;

Section section(const pt::ptree& root, const std::string& name) {
  auto child = root.get_child_optional(name);
  return Section(child ? *child : kEmpty, name);
}

}  // namespace

std::vector<double> parse_grid(const std::string& text, const std::string& field) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::istringstream is(text);
    for (std::string p; std::getline(is, p, ':');) parts.push_back(p);
    if (parts.size() != 3) fail(field, "range must be start:step:stop");
    const double a = to_double(parts[0], field);
    const double step = to_double(parts[1], field);
    const double b = to_double(parts[2], field);
    if (!(step > 0)) fail(field, "range step must be > 0");
    if (b < a) fail(field, "range stop precedes start");
    const double count = std::floor((b - a) / step + 1e-9);
    if (count > 1e6) fail(field, "range has too many points");
    for (long k = 0; k <= static_cast<long>(count); ++k) out.push_back(a + static_cast<double>(k) * step);
  } else {
    std::istringstream is(text);
    for (std::string p; std::getline(is, p, ',');) {
      const auto first = p.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      out.push_back(to_double(p.substr(first), field));
    }
  }
  if (out.empty()) fail(field, "grid is empty");
  return out;
}

RunConfig parse_config(std::istream& is, const std::string& name) {
  const std::string text{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
  pt::ptree root;
  try {
    std::istringstream in(text);
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: " + name + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  // the ini reader drops sections without keys; an empty [qubit] still selects the model
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    const auto a = line.find_first_not_of(" \t");
    const auto b = line.find_last_not_of(" \t\r");
    if (a == std::string::npos || line[a] != '[' || line[b] != ']') continue;
    const std::string key = line.substr(a + 1, b - a - 1);
    if (!root.get_child_optional(pt::ptree::path_type(key, '\0'))) root.push_back({key, pt::ptree{}});
  }
  for (const auto& [key, child] : root) {
    if (key != "decay" && key != "qubit" && key != "transmon" && key != "reservoir" && key != "protocol" &&
        key != "wigner")
      fail("[" + key + "]", "unknown section");
  }

  RunConfig cfg;
  const bool has_qubit = root.get_child_optional("qubit").has_value();
  const bool has_transmon = root.get_child_optional("transmon").has_value();
  if (!has_qubit && !has_transmon)
    throw ConfigError("config: missing system block: add a [qubit] or a [transmon] section");
  if (has_qubit && has_transmon)
    throw ConfigError("config: give exactly one system block, not both [qubit] and [transmon]");

  const Section decay = section(root, "decay");
  decay.reject_unknown({"t1_us", "t_phi_us"});
  cfg.t1_us = decay.number("t1_us");
  if (!(cfg.t1_us > 0)) fail(decay.field("t1_us"), "must be > 0");
  cfg.t_phi_us = decay.number("t_phi_us", 0.0);
  if (cfg.t_phi_us < 0) fail(decay.field("t_phi_us"), "must be >= 0 (0 disables dephasing)");

  if (has_qubit) {
    const Section q = section(root, "qubit");
    q.reject_unknown({"detuning_mhz"});
    cfg.qubit = QubitSpec{q.number("detuning_mhz", 0.0)};
  } else {
    const Section t = section(root, "transmon");
    t.reject_unknown({"e_c_ghz", "e_j_ghz", "omega_c_ghz", "g_ghz", "n_transmon", "n_photon", "n_charge",
                      "transition"});
    TransmonSpec spec;
    spec.params.e_c = t.number("e_c_ghz");
    spec.params.e_j = t.number("e_j_ghz");
    spec.params.omega_c = t.number("omega_c_ghz");
    spec.params.g = t.number("g_ghz");
    spec.params.n_transmon = t.integer("n_transmon", spec.params.n_transmon);
    spec.params.n_photon = t.integer("n_photon", spec.params.n_photon);
    spec.params.n_charge = t.integer("n_charge", spec.params.n_charge);
    if (auto tr = t.text("transition")) {
      const auto comma = tr->find(',');
      if (comma == std::string::npos) fail(t.field("transition"), "expected 'lower,upper' labels");
      spec.lower = tr->substr(0, comma);
      spec.upper = tr->substr(comma + 1);
    }
    try {
      spec.params.validate();
    } catch (const InvalidInput& e) {
      fail("[transmon]", e.what());
    }
    cfg.transmon = spec;
  }

  const Section r = section(root, "reservoir");
  r.reject_unknown({"n", "m", "m_phase_rad", "bandwidth_mhz", "center_ghz", "n_th", "p_excited", "eta"});
  cfg.reservoir.n = r.number("n", 0.0);
  cfg.reservoir.m = r.number("m", 0.0);
  cfg.reservoir.m_phase = r.number("m_phase_rad", 0.0);
  cfg.reservoir.bandwidth_mhz = r.number("bandwidth_mhz", cfg.reservoir.bandwidth_mhz);
  cfg.reservoir.center_ghz = r.maybe("center_ghz");
  cfg.reservoir.p_excited = r.maybe("p_excited");
  cfg.reservoir.eta = r.number("eta", 1.0);
  if (cfg.reservoir.n < 0) fail(r.field("n"), "must be >= 0");
  if (cfg.reservoir.m < 0) fail(r.field("m"), "must be >= 0 (use m_phase_rad for the phase)");
  if (cfg.reservoir.m * cfg.reservoir.m > cfg.reservoir.n * (cfg.reservoir.n + 1) + 1e-12)
    fail(r.field("m"), "violates M^2 <= N(N+1)");
  if (!(cfg.reservoir.bandwidth_mhz > 0)) fail(r.field("bandwidth_mhz"), "must be > 0");
  if (!(cfg.reservoir.eta > 0 && cfg.reservoir.eta <= 1)) fail(r.field("eta"), "must lie in (0, 1]");
  const auto n_th = r.maybe("n_th");
  if (n_th && cfg.reservoir.p_excited) fail(r.field("n_th"), "give either n_th or p_excited, not both");
  if (cfg.reservoir.p_excited) {
    try {
      cfg.reservoir.n_th = thermal_from_population(*cfg.reservoir.p_excited);
    } catch (const InvalidInput& e) {
      fail(r.field("p_excited"), e.what());
    }
  } else {
    cfg.reservoir.n_th = n_th.value_or(0.0);
    if (cfg.reservoir.n_th < 0) fail(r.field("n_th"), "must be >= 0");
  }

  const Section p = section(root, "protocol");
  p.reject_unknown({"omega_mod_mhz", "times_us", "phi_pi", "delta_mhz", "n_values", "prep_theta_pi",
                    "prep_phi_pi", "drive_khz"});
  cfg.protocol.omega_mod_mhz = p.number("omega_mod_mhz", 5.0);
  cfg.protocol.times_us = p.grid("times_us", "0:0.025:5");
  for (std::size_t k = 0; k < cfg.protocol.times_us.size(); ++k) {
    if (cfg.protocol.times_us[k] < 0 || (k > 0 && cfg.protocol.times_us[k] <= cfg.protocol.times_us[k - 1]))
      fail(p.field("times_us"), "times must be nonnegative and strictly increasing");
  }
  for (double v : p.grid("phi_pi", "0.5, 1")) cfg.protocol.phi.push_back(v * std::numbers::pi);
  cfg.protocol.delta_mhz = p.grid("delta_mhz", "-3:0.05:3");
  cfg.protocol.n_values = p.grid("n_values", "0:0.05:2");
  for (double v : cfg.protocol.n_values)
    if (v < 0) fail(p.field("n_values"), "N values must be >= 0");
  cfg.protocol.prep_theta = p.number("prep_theta_pi", 0.5) * std::numbers::pi;
  cfg.protocol.prep_phi = p.number("prep_phi_pi", 0.5) * std::numbers::pi;
  cfg.protocol.drive_khz = p.number("drive_khz", 0.0);

  const Section w = section(root, "wigner");
  w.reject_unknown({"points", "n_std"});
  cfg.wigner.points = w.integer("points", 201);
  cfg.wigner.n_std = w.number("n_std", 5.0);
  if (cfg.wigner.points < 3) fail(w.field("points"), "need at least 3 points");
  if (!(cfg.wigner.n_std > 0)) fail(w.field("n_std"), "must be > 0");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in, path);
}

SqueezedReservoir resolve_reservoir(const RunConfig& cfg, double center_ghz) {
  const ReservoirSpec& r = cfg.reservoir;
  return SqueezedReservoir(r.n, std::polar(r.m, r.m_phase), center_ghz, r.bandwidth_mhz, r.n_th);
}

DecayRates resolve_rates(const RunConfig& cfg) {
  const double n_th = cfg.reservoir.n_th;
  const double t1_int = cfg.t1_us * (2.0 * n_th + 1.0);
  if (cfg.qubit) {
    DecayRates r = DecayRates::from_times(t1_int, cfg.t_phi_us, cfg.reservoir.n + n_th, cfg.reservoir.m,
                                          cfg.qubit->detuning_mhz);
    r.n_floor = n_th;
    r.validate();
    return r;
  }
  const TransmonSpec& t = *cfg.transmon;
  const PolaritonSystem ps = diagonalize_polaritons(build_hamiltonian(t.params), t.params);
  TransitionChoice tr;
  try {
    tr = {ps.index_of(t.lower), ps.index_of(t.upper)};
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("config: [transmon] transition: ") + e.what());
  }
  if (tr.lower >= tr.upper) throw ConfigError("config: [transmon] transition: lower state must lie below upper");
  const double a2 = std::norm(ps.a(tr.lower, tr.upper));
  if (a2 <= 0) throw ConfigError("config: [transmon] transition: selected transition is forbidden");
  const double center = cfg.reservoir.center_ghz.value_or(ps.transition_ghz(tr.lower, tr.upper));
  const double gamma_phi = cfg.t_phi_us > 0 ? 1.0 / cfg.t_phi_us : 0.0;
  const SqueezedReservoir res = resolve_reservoir(cfg, center);
  DecayRates r =
      two_level_reduction(ps, 1.0 / (t1_int * a2), res.with_moments(res.n() + n_th, res.m()), gamma_phi, tr);
  r.n_floor = n_th;
  r.validate();
  return r;
}

}  // namespace sqz
