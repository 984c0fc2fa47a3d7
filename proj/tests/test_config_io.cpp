#include "support.hpp"

#include "sqz/config.hpp"
#include "sqz/io.hpp"

#include <json.hpp>

#include <sstream>

using namespace sqz;
using namespace sqz::testing;

namespace {

const std::string kConfigs = std::string(SQZ_SOURCE_DIR) + "/configs/";

RunConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is, "test.conf");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const std::string kMinimal = "[decay]\nt1_us = 0.65\n[qubit]\n";

}  // namespace

TEST_CASE("bundled transmon config") {
  const RunConfig cfg = load_config(kConfigs + "paper.conf");
  CHECK(cfg.t1_us == 0.65);
  CHECK(cfg.t_phi_us == 6.6);
  REQUIRE(cfg.transmon.has_value());
  CHECK_FALSE(cfg.qubit.has_value());
  CHECK(cfg.transmon->params.e_c == 0.208);
  CHECK(cfg.transmon->params.e_j == 23.27);
  CHECK(cfg.transmon->params.omega_c == 6.0456);
  CHECK(cfg.transmon->params.g == 0.126);
  CHECK(cfg.transmon->lower == "g");
  CHECK(cfg.transmon->upper == "-");
  CHECK(cfg.reservoir.n == 0.88);
  CHECK(cfg.reservoir.m == 1.08);
  CHECK(cfg.reservoir.eta == 0.5);
  CHECK(cfg.reservoir.bandwidth_mhz == 13.0);
  CHECK(cfg.reservoir.n_th == thermal_from_population(0.018));
  CHECK(cfg.reservoir.n_th == Catch::Approx(0.0187).margin(5e-5));
  CHECK(cfg.reservoir.n_th <= 0.019);
  CHECK(cfg.protocol.omega_mod_mhz == 5.0);
  CHECK(cfg.protocol.times_us.size() == 201);
  CHECK(cfg.protocol.times_us.back() == Catch::Approx(5.0).epsilon(1e-12));
  REQUIRE(cfg.protocol.phi.size() == 2);
  CHECK(cfg.protocol.phi[0] == Catch::Approx(kPi / 2).epsilon(1e-15));
  CHECK(cfg.protocol.delta_mhz.size() == 121);
  CHECK(cfg.protocol.prep_theta == Catch::Approx(0.67 * kPi).epsilon(1e-15));
  CHECK(cfg.protocol.drive_khz == 10.0);
  CHECK(cfg.wigner.points == 201);

  const DecayRates r = resolve_rates(cfg);
  const double n_th = cfg.reservoir.n_th;
  CHECK(r.gamma == Catch::Approx(1 / (0.65 * (2 * n_th + 1))).epsilon(1e-12));
  CHECK(r.n == Catch::Approx(0.88 + n_th).epsilon(1e-14));
  CHECK(r.n_floor == n_th);
  CHECK(r.m_abs == 1.08);
  CHECK(r.delta_mhz == 0.0);
  CHECK(r.gamma_phi == Catch::Approx(1 / 6.6).epsilon(1e-15));
  // measured T1 and T2* are what the floor-included model reproduces
  CHECK(axis_timescales(r.vacuum()).tz == Catch::Approx(0.65).epsilon(1e-12));
  CHECK(axis_timescales(r.vacuum()).tx == Catch::Approx(1 / (1 / 1.3 + 1 / 6.6)).epsilon(1e-12));
}

TEST_CASE("bundled qubit config") {
  const RunConfig cfg = load_config(kConfigs + "qubit.conf");
  REQUIRE(cfg.qubit.has_value());
  const DecayRates r = resolve_rates(cfg);
  const DecayRates expected = DecayRates::from_times(0.65, 6.6, 0.88, 1.08);
  CHECK(r.gamma == expected.gamma);
  CHECK(r.gamma_phi == expected.gamma_phi);
  CHECK(r.n == 0.88);
  CHECK(r.m_abs == 1.08);
  CHECK(cfg.protocol.phi.size() == 5);
}

TEST_CASE("center frequency and detuning") {
  const std::string text = kMinimal + "detuning_mhz = 1.5\n[reservoir]\nn = 0.5\nm = 0.6\n";
  CHECK(resolve_rates(parse(text)).delta_mhz == 1.5);

  std::string tm = "[decay]\nt1_us = 0.65\n[transmon]\ne_c_ghz = 0.208\ne_j_ghz = 23.27\nomega_c_ghz = 6.0456\n"
                   "g_ghz = 0.126\n[reservoir]\nn = 0.5\nm = 0.6\ncenter_ghz = ";
  const RunConfig base = parse(tm + "5.9\n");
  const DecayRates r = resolve_rates(base);
  CHECK(r.delta_mhz == Catch::Approx((5.9 - 5.89882639) * 1e3).margin(1e-4));
}

TEST_CASE("grids") {
  CHECK(parse_grid("0:0.5:2", "f") == std::vector<double>{0, 0.5, 1, 1.5, 2});
  CHECK(parse_grid("1, 2,3", "f") == std::vector<double>{1, 2, 3});
  CHECK(parse_grid("-1:1:1", "f") == std::vector<double>{-1, 0, 1});
  CHECK(parse_grid("0:0.025:5", "f").size() == 201);
  CHECK_THROWS_AS(parse_grid("1:0:2", "f"), ConfigError);
  CHECK_THROWS_AS(parse_grid("3:1:2", "f"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1:2", "f"), ConfigError);
  CHECK_THROWS_AS(parse_grid("a, b", "f"), ConfigError);
  CHECK_THROWS_AS(parse_grid(" , ", "f"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1, inf", "f"), ConfigError);
}

TEST_CASE("config errors name the field") {
  CHECK(error_of("").find("missing system block") != std::string::npos);
  CHECK(error_of("[decay]\nt1_us = 1\n").find("missing system block") != std::string::npos);
  CHECK(error_of(kMinimal + "[transmon]\n").find("exactly one system block") != std::string::npos);
  CHECK(error_of("[qubit]\n").find("[decay] t1_us") != std::string::npos);
  CHECK(error_of(kMinimal + "[reservoir]\nnn = 1\n").find("[reservoir] nn: unknown key") != std::string::npos);
  CHECK(error_of(kMinimal + "[extra]\nx = 1\n").find("extra") != std::string::npos);
  CHECK(error_of(kMinimal + "[reservoir]\nn = abc\n").find("[reservoir] n: 'abc' is not a number") !=
        std::string::npos);
  CHECK(error_of(kMinimal + "[reservoir]\nn = 1\nm = 2\n").find("[reservoir] m") != std::string::npos);
  CHECK(error_of(kMinimal + "[reservoir]\nn_th = 0.01\np_excited = 0.01\n").find("either n_th or p_excited") !=
        std::string::npos);
  CHECK(error_of(kMinimal + "[reservoir]\np_excited = 0.6\n").find("[reservoir] p_excited") != std::string::npos);
  CHECK(error_of(kMinimal + "[reservoir]\neta = 0\n").find("[reservoir] eta") != std::string::npos);
  CHECK(error_of(kMinimal + "[protocol]\ntimes_us = 1, 0.5\n").find("[protocol] times_us") != std::string::npos);
  CHECK(error_of(kMinimal + "[wigner]\npoints = 2.5\n").find("[wigner] points") != std::string::npos);
  CHECK(error_of("[decay]\nt1_us = 0.65\n[transmon]\ne_c_ghz = 0.2\n").find("[transmon] e_j_ghz") !=
        std::string::npos);
  CHECK(error_of("[decay]\nt1_us = 0.65\n[transmon]\ne_c_ghz = 0.2\ne_j_ghz = 20\nomega_c_ghz = 6\ng_ghz = 0.1\n"
                 "transition = g-\n")
            .find("[transmon] transition") != std::string::npos);
  CHECK(error_of("[decay\n").find("test.conf") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/file.conf"), ConfigError);
}

TEST_CASE("unknown transition label") {
  const RunConfig cfg = parse(
      "[decay]\nt1_us = 0.65\n[transmon]\ne_c_ghz = 0.208\ne_j_ghz = 23.27\nomega_c_ghz = 6.0456\ng_ghz = 0.126\n"
      "transition = g,nope\n");
  CHECK_THROWS_AS(resolve_rates(cfg), ConfigError);
}

TEST_CASE("number formatting") {
  CHECK(io::format_number(0.0) == "0");
  CHECK(io::format_number(-0.0) == "0");
  CHECK(io::format_number(1.0 / 3) == "0.333333333");
  CHECK(io::format_number(1234567890.0) == "1.23456789e+09");
  CHECK(io::format_number(-2.5e-12) == "-2.5e-12");
}

TEST_CASE("trace CSV round trip") {
  Trace tr{{0.0, 0.1, 0.2}, {1.0, 0.5, -0.25}, "demo"};
  std::stringstream ss;
  io::write_trace_csv(ss, tr);
  CHECK(ss.str().rfind("#schema=trace/1", 0) == 0);
  const Trace back = io::read_trace_csv(ss, "demo");
  CHECK(back.times == tr.times);
  CHECK(back.values == tr.values);

  std::istringstream bare("0,1\n1,0.5\n");
  CHECK(io::read_trace_csv(bare, "bare").values.size() == 2);
  std::istringstream bad("t,v\n0,1\nx,y\n");
  CHECK_THROWS_AS(io::read_trace_csv(bad, "bad"), InvalidInput);
  std::istringstream one_col("0\n");
  CHECK_THROWS_AS(io::read_trace_csv(one_col, "one"), InvalidInput);
  std::istringstream empty("#schema=trace/1\n");
  CHECK_THROWS_AS(io::read_trace_csv(empty, "empty"), InvalidInput);
}

TEST_CASE("Wigner CSV layout") {
  const QuadratureVariances v{1.0, 1.0};
  GridSpec g;
  g.i_points = 3;
  g.q_points = 2;
  g.i_min = -1;
  g.i_max = 1;
  g.q_min = 0;
  g.q_max = 1;
  const WignerGrid w = wigner(v, g);
  std::ostringstream os;
  io::write_wigner_csv(os, w);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line.rfind("#schema=wigner/1", 0) == 0);
  std::getline(is, line);
  CHECK(line == "I\\Q,0,1");
  std::getline(is, line);
  CHECK(line.rfind("-1,", 0) == 0);
  std::getline(is, line);
  CHECK(line == "0," + io::format_number(w.values(1, 0)) + "," + io::format_number(w.values(1, 1)));
  CHECK(w.values(1, 0) > w.values(1, 1));
}

TEST_CASE("schema lines on every table") {
  std::ostringstream a, b, c, d;
  const auto t = linspace(0, 1, 3);
  const RamseyTrace tr = ramsey(DecayRates::from_times(0.65, 0, 0, 0), 0.5, 5.0, t);
  io::write_ramsey_csv(a, std::span<const RamseyTrace>(&tr, 1));
  io::write_trajectory_csv(b, tomography_trajectory(DecayRates::from_times(0.65, 0, 0, 0), 1, 1, t));
  io::write_detuning_csv(c, {}, {});
  io::write_gain_csv(d, gain_sweep(t, 0.5, 0.65, 6.6));
  for (const std::string& s : {a.str(), b.str(), c.str(), d.str()}) CHECK(s.rfind("#schema=", 0) == 0);
  CHECK(a.str().find("phi_rad,squeezing_on,t_us,sz,quadrature\n") != std::string::npos);
  CHECK(b.str().find("t_us,sx,sy,sz\n") != std::string::npos);
}

TEST_CASE("JSON summaries") {
  using nlohmann::json;
  MomentEstimate me = moments_from_decays(0.65, 0.65 / 2.76, 0.65 / 0.3);
  const json m = json::parse(io::moments_json(me));
  CHECK(m.at("N").get<double>() == Catch::Approx(0.88).epsilon(1e-8));
  CHECK(m.at("M").get<double>() == Catch::Approx(1.08).epsilon(1e-8));
  CHECK(m.contains("eta"));

  const TransmonCavityParams p;
  const PolaritonSystem ps = diagonalize_polaritons(build_hamiltonian(p), p);
  const json j = json::parse(io::polariton_json(ps));
  CHECK(j.at("energies_ghz").size() == static_cast<std::size_t>(ps.dimension()));
  CHECK(j.at("labels").size() == ps.labels.size());
  CHECK(j.at("splitting_mhz").get<double>() == Catch::Approx(254.940193).epsilon(1e-8));
  CHECK(j.at("g_to_minus_ghz").get<double>() == Catch::Approx(5.89882639).epsilon(1e-9));

  const json g = json::parse(io::gain_json(gain_sweep(std::vector<double>{0.0, 0.88}, 0.5, 0.65, 6.6), 0.5));
  CHECK(g.at("eta").get<double>() == 0.5);
  CHECK(g.at("rows").size() == 2);
  CHECK(g.at("rows").at(1).at("N").get<double>() == 0.88);
}
