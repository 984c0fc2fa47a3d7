#include "support.hpp"

#include "sqz/errors.hpp"
#include "sqz/estimation.hpp"
#include "sqz/protocols.hpp"
#include "sqz/reservoir.hpp"

using namespace sqz;
using namespace sqz::testing;

namespace {

const DecayRates kPaper = DecayRates::from_times(0.65, 6.6, 0.88, 1.08);

BlochState random_state(std::mt19937_64& rng) {
  const Eigen::Vector3d v =
      Eigen::Vector3d(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)).normalized() * uniform(rng, 0, 1);
  return BlochState::from(v);
}

}  // namespace

TEST_CASE("rotations") {
  std::mt19937_64 rng(kSeed);
  for (int rep = 0; rep < 100; ++rep) {
    const BlochState s = random_state(rng);
    const double a = uniform(rng, -kPi, kPi);
    const BlochState twice = apply_rotation(apply_rotation(s, kPi, a), kPi, a);
    CHECK((twice.vec() - s.vec()).norm() <= 1e-14);
    const BlochState r = apply_rotation(s, uniform(rng, 0, 2 * kPi), a);
    CHECK(std::abs(r.norm_sq() - s.norm_sq()) <= 1e-14);
  }
  // right-hand rule about +x takes +z to -y
  const BlochState y = apply_rotation(BlochState::ground(), kPi / 2, 0.0);
  CHECK((y.vec() - Eigen::Vector3d(0, -1, 0)).norm() <= 1e-15);
  // and about +y takes +z to +x
  const BlochState x = apply_rotation(BlochState::ground(), kPi / 2, kPi / 2);
  CHECK((x.vec() - Eigen::Vector3d(1, 0, 0)).norm() <= 1e-15);
}

TEST_CASE("state preparation") {
  const BlochState s = prepare(0.67 * kPi, 0.83 * kPi);
  CHECK(s.sz == Catch::Approx(std::cos(0.67 * kPi)).epsilon(1e-14));
  CHECK(s.sz == Catch::Approx(-0.5090).margin(1e-4));
  CHECK(s.sx == Catch::Approx(std::sin(0.67 * kPi) * std::sin(0.83 * kPi)).epsilon(1e-13));
  CHECK(s.sy == Catch::Approx(std::sin(0.67 * kPi) * std::cos(0.83 * kPi)).epsilon(1e-13));
  // phi = pi/2 is +x, phi = pi is -y
  CHECK((prepare(kPi / 2, kPi / 2).vec() - Eigen::Vector3d(1, 0, 0)).norm() <= 1e-15);
  CHECK((prepare(kPi / 2, kPi).vec() - Eigen::Vector3d(0, -1, 0)).norm() <= 1e-15);
}

TEST_CASE("tomography readout equals the Bloch components") {
  std::mt19937_64 rng(kSeed + 1);
  for (int rep = 0; rep < 200; ++rep) {
    const BlochState s = random_state(rng);
    CHECK(std::abs(measure(s, MeasurementBasis::X) - s.sx) <= 1e-12);
    CHECK(std::abs(measure(s, MeasurementBasis::Y) - s.sy) <= 1e-12);
    CHECK(measure(s, MeasurementBasis::Z) == s.sz);
  }
}

TEST_CASE("pulse sequence validation") {
  PulseSequence seq;
  seq.pulses = {{kPi / 2, 0.0, 0.0}, {kPi / 2, 0.0, 1.0}};
  CHECK_NOTHROW(seq.validate());
  seq.pulses[1].time = -1.0;
  CHECK_THROWS_AS(seq.validate(), InvalidInput);
  seq.pulses[1].time = 1.0;
  seq.pulses[0].angle = 0.0;
  CHECK_THROWS_AS(seq.validate(), InvalidInput);
  seq.pulses[0].angle = 7.0;
  CHECK_THROWS_AS(seq.validate(), InvalidInput);
  seq.pulses[0].angle = kPi;
  seq.squeezing_on = 2.0;
  seq.squeezing_off = 1.0;
  CHECK_THROWS_AS(seq.validate(), InvalidInput);
  seq.squeezing_on = 0.0;
  seq.measure_time = 0.5;
  CHECK_THROWS_AS(seq.validate(), InvalidInput);
}

TEST_CASE("squeezing window") {
  PulseSequence seq;
  seq.pulses = {{kPi / 2, preparation_azimuth(kPi / 2), 0.0}};
  seq.measure_time = 2.0;
  seq.basis = MeasurementBasis::X;
  const AxisTimescales ts = axis_timescales(kPaper);
  const double t2 = axis_timescales(kPaper.vacuum()).tx;
  CHECK(run_sequence(seq, kPaper) == Catch::Approx(std::exp(-2.0 / ts.tx)).epsilon(1e-12));
  seq.squeezing_on = 5.0;  // never reached
  CHECK(run_sequence(seq, kPaper) == Catch::Approx(std::exp(-2.0 / t2)).epsilon(1e-12));
  seq.squeezing_on = 0.5;
  seq.squeezing_off = 1.5;
  CHECK(run_sequence(seq, kPaper) == Catch::Approx(std::exp(-1.0 / t2 - 1.0 / ts.tx)).epsilon(1e-12));
}

TEST_CASE("Ramsey closed form on resonance") {
  const auto t = linspace(0, 5, 201);
  const AxisTimescales ts = axis_timescales(kPaper);
  for (double phi : {0.0, 0.3, kPi / 2, 2.0, kPi}) {
    const RamseyTrace tr = ramsey(kPaper, phi, 5.0, t);
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double w = 2 * kPi * 5.0 * t[k];
      const double ex = std::exp(-t[k] / ts.tx), ey = std::exp(-t[k] / ts.ty);
      const double expected = std::sin(phi) * ex * std::cos(w) - std::cos(phi) * ey * std::sin(w);
      CHECK(std::abs(tr.sz[k] - expected) <= 1e-12);
      CHECK(std::abs(tr.sz[k]) <= 1.0);
    }
  }
  // prepared along +x the envelope is exp(-t/Tx), along -y exp(-t/Ty)
  const auto ex = ramsey(kPaper, kPi / 2, 5.0, t).envelope();
  const auto ey = ramsey(kPaper, kPi, 5.0, t).envelope();
  for (std::size_t k = 0; k < t.size(); ++k) {
    CHECK(std::abs(ex[k] - std::exp(-t[k] / ts.tx)) <= 1e-12);
    CHECK(std::abs(ey[k] - std::exp(-t[k] / ts.ty)) <= 1e-12);
  }
  CHECK(ts.tx == Catch::Approx(1.63).margin(0.01));
  CHECK(ts.ty == Catch::Approx(0.254).margin(0.001));
}

TEST_CASE("Ramsey without squeezing decays uniformly with T2*") {
  const auto t = linspace(0, 5, 201);
  for (double phi : {0.0, kPi / 4, kPi / 2, 3 * kPi / 4, kPi}) {
    const RamseyTrace tr = ramsey(kPaper, phi, 5.0, t, false);
    const SinusoidFit fit = fit_damped_sinusoid(tr.times, tr.sz, 5.0);
    CHECK(fit.tau == Catch::Approx(1.0 / (1 / 1.3 + 1 / 6.6)).epsilon(1e-6));
    CHECK(fit.tau == Catch::Approx(1.086).margin(5e-4));
  }
}

TEST_CASE("Ramsey symmetries") {
  std::mt19937_64 rng(kSeed + 2);
  const auto t = linspace(0, 3, 61);
  for (int rep = 0; rep < 10; ++rep) {
    const double n = uniform(rng, 0, 2);
    const DecayRates r{uniform(rng, 0.5, 3), uniform(rng, 0, 0.3), n, uniform(rng, 0, 1) * ideal_M(n),
                       uniform(rng, -1, 1)};
    const double phi = uniform(rng, -kPi, kPi);
    const RamseyTrace a = ramsey(r, phi, 5.0, t);
    const RamseyTrace b = ramsey(r, phi + kPi, 5.0, t);
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(std::abs(a.sz[k] + b.sz[k]) <= 1e-12);
  }
  // vanishing rates: undamped unit-amplitude fringe
  const DecayRates frozen{1e-13, 0.0, 0.0, 0.0, 0.0};
  const RamseyTrace f = ramsey(frozen, 0.7, 5.0, t);
  for (std::size_t k = 0; k < t.size(); ++k)
    CHECK(std::abs(f.sz[k] - std::sin(0.7 - 2 * kPi * 5.0 * t[k])) <= 1e-9);

  const std::vector<double> bad = {0.0, 0.0};
  CHECK_THROWS_AS(ramsey(kPaper, 0.0, 5.0, bad), InvalidInput);
}

TEST_CASE("tomography trajectory") {
  const auto t = linspace(0, 30, 121);
  const BlochTrajectory traj = tomography_trajectory(kPaper, 0.67 * kPi, 0.83 * kPi, t);
  CHECK((traj.states.front().vec() - prepare(0.67 * kPi, 0.83 * kPi).vec()).norm() == 0.0);
  const BlochState last = traj.states.back();
  CHECK(std::abs(last.sx) <= 1e-6);
  CHECK(std::abs(last.sy) <= 1e-6);
  CHECK(last.sz == Catch::Approx(1 / 2.76).epsilon(1e-6));
  for (const BlochState& s : traj.states) CHECK(s.norm_sq() <= 1.0 + 1e-9);

  const DecayRates vac = DecayRates::from_times(0.65, 0.0, 0.0, 0.0);
  const BlochTrajectory v = tomography_trajectory(vac, 0.67 * kPi, 0.83 * kPi, t);
  for (std::size_t k = 0; k < t.size(); ++k)
    CHECK(std::abs(v.states[k].sz - (1 + (std::cos(0.67 * kPi) - 1) * std::exp(-t[k] / 0.65))) <= 1e-12);
}

TEST_CASE("driven trajectory") {
  const auto t = linspace(0, 4, 41);
  const BlochTrajectory free = tomography_trajectory(kPaper, 0.67 * kPi, 0.83 * kPi, t);
  const BlochTrajectory zero = driven_trajectory(kPaper, 0.67 * kPi, 0.83 * kPi, Eigen::Vector3d::Zero(), t);
  for (std::size_t k = 0; k < t.size(); ++k) CHECK((free.states[k].vec() - zero.states[k].vec()).norm() <= 1e-8);

  const Eigen::Vector3d drive(2 * kPi * 0.01, 0, 0);
  const auto long_t = linspace(0, 40, 5);
  const BlochTrajectory d = driven_trajectory(kPaper, 0.67 * kPi, 0.83 * kPi, drive, long_t);
  CHECK((d.states.back().vec() - steady_state(kPaper, drive).vec()).norm() <= 1e-6);
  CHECK_THROWS_AS(driven_trajectory(kPaper.with_detuning(1.0), 0.5, 0.5, drive, t), InvalidInput);
}

TEST_CASE("relaxation trace") {
  const auto t = linspace(0, 2, 41);
  const auto sz = relaxation_trace(kPaper, t);
  const double ss = 1 / 2.76, tz = 0.65 / 2.76;
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(std::abs(sz[k] - (ss + (-1 - ss) * std::exp(-t[k] / tz))) <= 1e-12);
}

TEST_CASE("fit window") {
  const auto s = FitWindow{}.samples();
  CHECK(s.size() == 201);
  CHECK(s.front() == 0.0);
  CHECK(s.back() == 5.0);
  CHECK_THROWS_AS((FitWindow{1.0, 1.0, 10}.samples()), InvalidInput);
  CHECK_THROWS_AS((FitWindow{0.0, 1.0, 1}.samples()), InvalidInput);
}

TEST_CASE("detuning sweep") {
  const DecayRates r = DecayRates::from_times(0.65, 0.0, 0.88, 1.08);
  const AxisTimescales ts = axis_timescales(r);
  std::vector<double> deltas;
  for (int k = -20; k <= 20; ++k) deltas.push_back(0.1 * k);
  const auto xs = detuning_sweep(r, deltas, kPi / 2);
  const auto ys = detuning_sweep(r, deltas, kPi);
  REQUIRE(xs.size() == deltas.size());
  const std::size_t mid = 20;
  CHECK(xs[mid].t_eff == Catch::Approx(ts.tx).epsilon(1e-6));
  CHECK(ys[mid].t_eff == Catch::Approx(ts.ty).epsilon(1e-6));
  CHECK(xs[mid].t_eff > 2 * 0.65);
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    CHECK(xs[k].ok);
    CHECK(ys[k].ok);
    CHECK(rel_err(xs[k].t_eff, xs[deltas.size() - 1 - k].t_eff) <= 1e-6);
    CHECK(rel_err(ys[k].t_eff, ys[deltas.size() - 1 - k].t_eff) <= 1e-6);
    CHECK(xs[k].t_eff <= xs[mid].t_eff);
    CHECK(ys[k].t_eff >= ys[mid].t_eff);
    CHECK(xs[k].t_eff_err >= 0.0);
  }
  // Tx exceeds 2 T1 only near resonance
  CHECK(xs.front().t_eff < 2 * 0.65);
  CHECK(xs.back().t_eff < 2 * 0.65);

  // far detuned, both axes approach 2 T1 / (2N + 1)
  const std::vector<double> far = {-20.0, 20.0};
  const double target = 2 * 0.65 / 2.76;
  for (double phi : {kPi / 2, kPi})
    for (const DetuningPoint& p : detuning_sweep(r, far, phi)) CHECK(rel_err(p.t_eff, target) <= 0.02);

  const auto [fast, slow] = decay_eigenrates(r.with_detuning(0.1));
  CHECK(xs[21].slow_eigen_time == Catch::Approx(1 / slow.real()).epsilon(1e-14));
  CHECK(xs[21].fast_eigen_time == Catch::Approx(1 / fast.real()).epsilon(1e-14));
}

TEST_CASE("detuning sweep reports failures per point") {
  // envelope essentially frozen over the window: the fit reports no decay
  const DecayRates slow{1e-300, 0.0, 0.0, 0.0, 0.0};
  const std::vector<double> deltas = {0.0, 1.0};
  const auto pts = detuning_sweep(slow, deltas, kPi / 2);
  REQUIRE(pts.size() == 2);
  for (const auto& p : pts) {
    CHECK_FALSE(p.ok);
    CHECK_FALSE(p.error.empty());
  }
}

TEST_CASE("gain sweep") {
  const std::vector<double> ns = {0.0, 0.88, 1.5};
  const auto rows = gain_sweep(ns, 0.5, 0.65, 6.6);
  REQUIRE(rows.size() == 3);
  const double t2 = 1 / (1 / 1.3 + 1 / 6.6);
  CHECK(rows[0].tx == Catch::Approx(t2).epsilon(1e-13));
  CHECK(rows[0].ty == Catch::Approx(t2).epsilon(1e-13));
  CHECK(rows[0].tz == Catch::Approx(0.65).epsilon(1e-13));
  CHECK(rows[1].m_minus_n == Catch::Approx(0.222).margin(5e-4));
  CHECK(rows[1].tx_tilde == Catch::Approx(0.65 / (0.88 - rows[1].m + 0.5)).epsilon(1e-13));
  CHECK(rows[1].tx_tilde == Catch::Approx(2.34).margin(0.01));

  const auto ideal = gain_sweep(ns, 1.0, 0.65, 6.6);
  for (const GainRow& row : ideal) CHECK(row.m_minus_n == Catch::Approx(ideal_M(row.n) - row.n).margin(1e-14));

  CHECK_THROWS_AS(gain_sweep(std::vector<double>{-1.0}, 0.5, 0.65, 6.6), InvalidInput);
  CHECK_THROWS_AS(gain_sweep(ns, 0.0, 0.65, 6.6), InvalidInput);
}
