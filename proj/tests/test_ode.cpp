#include "support.hpp"

#include "sqz/blochdyn.hpp"
#include "sqz/numerics/ode.hpp"

using namespace sqz;
using namespace sqz::testing;

TEST_CASE("scalar exponential decay") {
  const double tol = 1e-8;
  Eigen::VectorXd y0(1);
  y0 << 1.0;
  const auto y = integrate_ode([](double, const Eigen::VectorXd& y) { return Eigen::VectorXd(-y); }, y0, 0.0, 1.0,
                               OdeOptions{tol});
  CHECK(std::abs(y(0) - std::exp(-1.0)) <= tol);
}

TEST_CASE("null dynamics stay constant exactly") {
  Eigen::VectorXcd y0(2);
  y0 << std::complex<double>(0.3, -0.2), 1.7;
  const auto times = linspace(0, 3, 31);
  const auto traj = integrate_ode([](double, const Eigen::VectorXcd& y) { return Eigen::VectorXcd::Zero(y.size()).eval(); },
                                  y0, 0.0, 3.0, times, OdeOptions{});
  REQUIRE(traj.states.size() == times.size());
  for (const auto& s : traj.states) CHECK(s == y0);
}

TEST_CASE("vacuum Bloch equations against analytic exponentials") {
  const double tol = 1e-9;
  const DecayRates r = DecayRates::from_times(0.65, 0.0, 0.0, 0.0);
  const Eigen::Vector3d s0(0.6, -0.3, -0.5);
  const auto times = linspace(0, 5, 101);
  const auto traj = integrate_ode(
      [&](double, const Eigen::Vector3d& s) { return bloch_rhs(BlochState::from(s), r); }, s0, 0.0, 5.0, times,
      OdeOptions{tol});
  double worst = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    const Eigen::Vector3d exact(s0.x() * std::exp(-t / 1.3), s0.y() * std::exp(-t / 1.3),
                                1.0 + (s0.z() - 1.0) * std::exp(-t / 0.65));
    worst = std::max(worst, (traj.states[k] - exact).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= 10 * tol);
}

TEST_CASE("linear 2x2 systems match the closed-form exponential") {
  std::mt19937_64 rng(kSeed);
  const double tol = 1e-9;
  for (int rep = 0; rep < 10; ++rep) {
    // damped rotation: eigenvalues -a +/- i w
    const double a = uniform(rng, 0.1, 2.0), w = uniform(rng, 0.0, 10.0);
    Eigen::Matrix2d m;
    m << -a, -w, w, -a;
    const Eigen::Vector2d y0(uniform(rng, -1, 1), uniform(rng, -1, 1));
    const double t1 = uniform(rng, 0.5, 4.0);
    const Eigen::Vector2d y = integrate_ode([&](double, const Eigen::Vector2d& y) { return Eigen::Vector2d(m * y); }, y0,
                                            0.0, t1, OdeOptions{tol});
    Eigen::Matrix2d rot;
    rot << std::cos(w * t1), -std::sin(w * t1), std::sin(w * t1), std::cos(w * t1);
    const Eigen::Vector2d exact = std::exp(-a * t1) * rot * y0;
    CHECK((y - exact).cwiseAbs().maxCoeff() <= 10 * tol);
  }
}

TEST_CASE("ode input errors") {
  Eigen::VectorXd y0 = Eigen::VectorXd::Ones(1);
  auto f = [](double, const Eigen::VectorXd& y) { return Eigen::VectorXd(-y); };
  CHECK_THROWS_AS(integrate_ode(f, y0, 0.0, 1.0, OdeOptions{0.0}), InvalidInput);
  CHECK_THROWS_AS(integrate_ode(f, y0, 1.0, 1.0, OdeOptions{}), InvalidInput);
  const std::vector<double> bad = {0.5, 0.2};
  CHECK_THROWS_AS(integrate_ode(f, y0, 0.0, 1.0, bad, OdeOptions{}), InvalidInput);
}

TEST_CASE("step size underflow is a stiffness error") {
  // blows up in finite time at t = 1
  Eigen::VectorXd y0 = Eigen::VectorXd::Ones(1);
  auto f = [](double, const Eigen::VectorXd& y) { return Eigen::VectorXd(y.array().square()); };
  CHECK_THROWS_AS(integrate_ode(f, y0, 0.0, 2.0, OdeOptions{1e-8}), StiffnessError);
}
