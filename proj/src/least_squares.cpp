#include "sqz/numerics/least_squares.hpp"

#include "sqz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sqz {
namespace {

struct Problem {
  const Model& model;
  const ModelGradient& gradient;
  std::span<const double> t;
  std::span<const double> y;

  Eigen::VectorXd residuals(const Eigen::VectorXd& p) const {
    Eigen::VectorXd r(static_cast<Eigen::Index>(t.size()));
    for (std::size_t k = 0; k < t.size(); ++k) r(static_cast<Eigen::Index>(k)) = model(t[k], p) - y[k];
    return r;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& p) const {
    const Eigen::Index m = static_cast<Eigen::Index>(t.size());
    const Eigen::Index n = p.size();
    Eigen::MatrixXd jac(m, n);
    if (gradient) {
      Eigen::RowVectorXd row(n);
      for (Eigen::Index k = 0; k < m; ++k) {
        gradient(t[static_cast<std::size_t>(k)], p, row);
        jac.row(k) = row;
      }
      return jac;
    }
    Eigen::VectorXd q = p;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(p(j)));
      q(j) = p(j) + h;
      const Eigen::VectorXd up = residuals(q);
      q(j) = p(j) - h;
      const Eigen::VectorXd down = residuals(q);
      q(j) = p(j);
      jac.col(j) = (up - down) / (2 * h);
    }
    return jac;
  }
};

Eigen::MatrixXd covariance_from(const Eigen::MatrixXd& jac, double ssr) {
  const Eigen::Index m = jac.rows();
  const Eigen::Index n = jac.cols();
  const double s2 = ssr / static_cast<double>(std::max<Eigen::Index>(m - n, 1));
  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jtj);
  return s2 * cod.pseudoInverse();
}

}  // namespace

FitResult fit_least_squares(const Model& model, std::span<const double> t, std::span<const double> y,
                            const Eigen::VectorXd& initial_guess, const LmOptions& opts,
                            const ModelGradient& gradient) {
  if (t.size() != y.size())
    throw InvalidInput("fit_least_squares: time and value arrays differ in length");
  if (t.size() < static_cast<std::size_t>(initial_guess.size()))
    throw InvalidInput("fit_least_squares: need at least as many samples as parameters (" +
                       std::to_string(t.size()) + " < " + std::to_string(initial_guess.size()) + ")");
  if (!initial_guess.allFinite()) throw InvalidInput("fit_least_squares: initial guess is not finite");

  const Problem problem{model, gradient, t, y};
  const Eigen::Index n = initial_guess.size();

  Eigen::VectorXd p = initial_guess;
  Eigen::VectorXd r = problem.residuals(p);
  if (!r.allFinite()) throw InvalidInput("fit_least_squares: model is not finite at the initial guess");
  double cost = r.squaredNorm();
  Eigen::MatrixXd jac = problem.jacobian(p);
  if (!jac.allFinite()) throw DegenerateFit("fit_least_squares: Jacobian is not finite at the initial guess");
  Eigen::VectorXd grad = jac.transpose() * r;
  Eigen::MatrixXd jtj = jac.transpose() * jac;

  double lambda = opts.initial_damping * std::max(jtj.diagonal().maxCoeff(), 1e-300);
  double nu = 2.0;
  int iter = 0;

  while (iter < opts.max_iterations && grad.lpNorm<Eigen::Infinity>() > opts.gradient_tol) {
    ++iter;
    // Marquardt scaling with a floor so zero Jacobian columns stay solvable.
    const double diag_floor = 1e-12 * std::max(jtj.diagonal().maxCoeff(), 1e-300);
    Eigen::MatrixXd damped = jtj;
    for (Eigen::Index j = 0; j < n; ++j) damped(j, j) += lambda * std::max(jtj(j, j), diag_floor);

    Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
    const Eigen::VectorXd step = ldlt.solve(-grad);
    if (ldlt.info() != Eigen::Success || !step.allFinite())
      throw DegenerateFit("fit_least_squares: damped normal equations are singular");

    if (step.norm() <= opts.step_tol * (p.norm() + opts.step_tol)) break;

    const Eigen::VectorXd trial = p + step;
    const Eigen::VectorXd r_trial = problem.residuals(trial);
    const double cost_trial = r_trial.allFinite() ? r_trial.squaredNorm()
                                                  : std::numeric_limits<double>::infinity();
    // Gain ratio against the quadratic model.
    const double predicted = -(2.0 * step.dot(grad) + step.dot(jtj * step));
    const double rho = predicted > 0 ? (cost - cost_trial) / predicted : -1.0;

    if (rho > 0) {
      p = trial;
      r = r_trial;
      const bool stalled = (cost - cost_trial) <= 1e-30 * std::max(cost, 1e-300);
      cost = cost_trial;
      jac = problem.jacobian(p);
      if (!jac.allFinite()) throw DegenerateFit("fit_least_squares: Jacobian became non-finite");
      grad = jac.transpose() * r;
      jtj = jac.transpose() * jac;
      lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
      if (stalled) break;
    } else {
      lambda *= nu;
      nu *= 2.0;
      if (lambda > 1e30) {
        if (grad.lpNorm<Eigen::Infinity>() <= opts.gradient_tol) break;
        // No damped step reduces the residual. With a full-rank Jacobian this is
        // a round-off limited minimum; otherwise the fit is degenerate.
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
        qr.setThreshold(1e-12);
        if (qr.rank() < n)
          throw DegenerateFit("fit_least_squares: Jacobian is rank deficient (rank " +
                              std::to_string(qr.rank()) + " of " + std::to_string(n) + ")");
        break;
      }
    }
  }

  FitResult out;
  out.params = p;
  out.residual_norm = std::sqrt(cost);
  out.gradient_norm = grad.lpNorm<Eigen::Infinity>();
  out.converged = out.gradient_norm <= opts.gradient_tol;
  out.iterations = iter;
  out.covariance = covariance_from(jac, cost);
  return out;
}

}  // namespace sqz
