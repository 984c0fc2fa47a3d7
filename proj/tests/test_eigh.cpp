#include "support.hpp"

#include "sqz/numerics/eigh.hpp"

using namespace sqz;
using namespace sqz::testing;

TEST_CASE("scalar matrix") {
  Eigen::MatrixXd h(1, 1);
  h << 3.25;
  const auto d = eigh(h);
  REQUIRE(d.eigenvalues(0) == 3.25);
  REQUIRE(d.eigenvectors(0, 0) == 1.0);
}

TEST_CASE("pauli x") {
  Eigen::MatrixXcd h(2, 2);
  h << 0, 1, 1, 0;
  const auto d = eigh(h);
  CHECK(d.eigenvalues(0) == Catch::Approx(-1.0).margin(1e-14));
  CHECK(d.eigenvalues(1) == Catch::Approx(1.0).margin(1e-14));
  const double s = 1.0 / std::sqrt(2.0);
  // (1, -1)/sqrt2 up to the gauge that makes the largest entry real positive
  CHECK(std::abs(std::abs(d.eigenvectors(0, 0)) - s) < 1e-12);
  CHECK(std::abs(d.eigenvectors(0, 0) + d.eigenvectors(1, 0)) < 1e-12);
  CHECK(std::abs(d.eigenvectors(0, 1) - d.eigenvectors(1, 1)) < 1e-12);
  CHECK(std::abs(d.eigenvectors(0, 1) - s) < 1e-12);
}

TEST_CASE("random hermitian reconstruction and invariants") {
  std::mt19937_64 rng(kSeed);
  for (Eigen::Index n : {2, 4, 7, 12, 30}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Eigen::MatrixXcd h = random_hermitian(rng, n);
      const auto d = eigh(h);
      const double hn = h.norm();
      INFO("n = " << n);
      CHECK((d.reconstruct() - h).norm() <= 1e-9 * hn);
      CHECK((d.eigenvectors.adjoint() * d.eigenvectors - Eigen::MatrixXcd::Identity(n, n)).norm() <= 1e-9);
      CHECK(std::abs(d.eigenvalues.sum() - h.trace().real()) <= 1e-9 * std::max(1.0, hn));
      for (Eigen::Index k = 0; k < n; ++k)
        CHECK((h * d.eigenvectors.col(k) - d.eigenvalues(k) * d.eigenvectors.col(k)).norm() <= 1e-9 * hn);
      for (Eigen::Index k = 1; k < n; ++k) CHECK(d.eigenvalues(k - 1) <= d.eigenvalues(k));
    }
  }
}

TEST_CASE("gauge and degenerate ordering are deterministic") {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 3);
  h(0, 0) = 2.0;
  h(1, 1) = 1.0;
  h(2, 2) = 1.0;
  const auto d = eigh(h);
  CHECK(d.eigenvalues(0) == 1.0);
  CHECK(d.eigenvalues(1) == 1.0);
  // degenerate pair ordered by dominant index: e1 before e2
  CHECK(d.eigenvectors(1, 0) == 1.0);
  CHECK(d.eigenvectors(2, 1) == 1.0);

  std::mt19937_64 rng(kSeed + 1);
  const Eigen::MatrixXcd a = random_hermitian(rng, 6);
  const auto d1 = eigh(a);
  const auto d2 = eigh(a);
  CHECK(d1.eigenvectors == d2.eigenvectors);
  for (Eigen::Index k = 0; k < 6; ++k) {
    Eigen::Index i;
    d1.eigenvectors.col(k).cwiseAbs().maxCoeff(&i);
    CHECK(d1.eigenvectors(i, k).imag() == 0.0);
    CHECK(d1.eigenvectors(i, k).real() > 0.0);
  }
}

TEST_CASE("eigh rejects bad input") {
  CHECK_THROWS_AS(eigh(Eigen::MatrixXd::Ones(2, 3)), InvalidInput);
  Eigen::MatrixXcd h(2, 2);
  h << 1, std::complex<double>(0, 1), std::complex<double>(0, 1), 1;
  CHECK_THROWS_AS(eigh(h), InvalidInput);
  JacobiOptions opts;
  opts.max_sweeps = 0;
  std::mt19937_64 rng(kSeed);
  CHECK_THROWS_AS(eigh(random_hermitian(rng, 4), opts), ConvergenceError);
}

TEST_CASE("hermitian check tolerance") {
  Eigen::MatrixXcd h(2, 2);
  h << 1.0, 2.0, 2.0 + 1e-13, 1.0;
  CHECK(is_hermitian(h));
  h(1, 0) = 2.0 + 1e-10;
  CHECK_FALSE(is_hermitian(h));
}
