#pragma once

#include <Eigen/Dense>

namespace lassoscreen {

/// Lasso instance with unit-norm dictionary columns. column_scales holds the
/// pre-normalization column norms, so coefficients can be mapped back to the
/// original scaling with original_coefficients().
struct LassoInstance {
  Eigen::MatrixXd dictionary;     // B, n x p
  Eigen::VectorXd target;         // x
  double lambda = 0.0;
  double lambda_max = 0.0;        // max_i |b_i . x|
  Eigen::VectorXd column_scales;  // original column norms

  Eigen::Index dim() const { return dictionary.rows(); }
  Eigen::Index num_features() const { return dictionary.cols(); }
};

struct LambdaMax {
  double value = 0.0;
  Eigen::Index index = 0;  // argmax feature
};

/// lambda_max = max_i |b_i . x| over unit-norm columns; the smallest lambda
/// at which the lasso solution is identically zero.
LambdaMax compute_lambda_max(const Eigen::MatrixXd& dictionary, const Eigen::VectorXd& target);

/// Normalizes columns in place (throws std::invalid_argument on a zero
/// column, naming its index) and fills lambda_max. lambda must be positive;
/// values above lambda_max are allowed (the solution is then zero).
LassoInstance make_lasso_instance(Eigen::MatrixXd dictionary, Eigen::VectorXd target,
                                  double lambda);

struct LassoSolution {
  Eigen::VectorXd coefficients;  // w
  Eigen::VectorXd dual_point;    // (x - B w) / lambda
  double objective = 0.0;        // 0.5 ||x - B w||^2 + lambda ||w||_1
  double kkt_violation = 0.0;
  int iterations = 0;  // completed coordinate sweeps
  bool converged = false;
};

/// Cyclic coordinate descent with KKT-based termination. For unit-norm
/// columns the update is w_i <- soft_threshold(w_i + b_i . residual, lambda),
/// with the residual maintained incrementally. Non-convergence within
/// max_sweeps is reported through `converged`, not an exception.
LassoSolution solve_lasso(const LassoInstance& inst, double tol = 1e-8, int max_sweeps = 10000,
                          const Eigen::VectorXd* warm_start = nullptr);

double lasso_objective(const LassoInstance& inst, const Eigen::VectorXd& w);

/// max_i of: (|b_i . theta| - 1)+ when w_i = 0, |b_i . theta - sign(w_i)|
/// otherwise, with theta = (x - B w)/lambda.
double lasso_kkt_violation(const LassoInstance& inst, const Eigen::VectorXd& w);

/// Coefficients with respect to the pre-normalization column scaling.
Eigen::VectorXd original_coefficients(const LassoInstance& inst, const Eigen::VectorXd& w);

}  // namespace lassoscreen
