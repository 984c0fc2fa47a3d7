#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>

namespace sqz {

struct FitResult {
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;  // s^2 (J^T J)^-1 at the optimum, s^2 = SSR / (m - n)
  double residual_norm = 0.0;  // ||y - model||_2
  double gradient_norm = 0.0;  // ||J^T r||_inf at the returned parameters
  bool converged = false;      // gradient_norm <= LmOptions::gradient_tol
  int iterations = 0;

  Eigen::VectorXd standard_errors() const { return covariance.diagonal().cwiseMax(0.0).cwiseSqrt(); }
};

struct LmOptions {
  double gradient_tol = 1e-10;
  double step_tol = 1e-15;  // relative parameter change that ends the iteration
  int max_iterations = 1000;
  double initial_damping = 1e-3;  // scaled by max diag(J^T J)
};

/// Model value at sample time t for parameters p.
using Model = std::function<double(double t, const Eigen::VectorXd& p)>;
/// Writes d model / d p at (t, p) into the row. Optional; central differences otherwise.
using ModelGradient = std::function<void(double t, const Eigen::VectorXd& p, Eigen::Ref<Eigen::RowVectorXd> row)>;

/// Damped Gauss-Newton minimization of sum_k (y_k - model(t_k, p))^2.
///
/// Deterministic for identical inputs. Throws InvalidInput for mismatched or
/// too-short data and DegenerateFit when the damped normal equations cannot be
/// solved or the damping grows without bound while the gradient is still large.
FitResult fit_least_squares(const Model& model, std::span<const double> t, std::span<const double> y,
                            const Eigen::VectorXd& initial_guess, const LmOptions& opts = {},
                            const ModelGradient& gradient = {});

}  // namespace sqz
