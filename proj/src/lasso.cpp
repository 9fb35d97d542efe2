#include "lassoscreen/lasso.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lassoscreen {

namespace {

double soft_threshold(double v, double threshold) {
  if (v > threshold) return v - threshold;
  if (v < -threshold) return v + threshold;
  return 0.0;
}

}  // namespace

LambdaMax compute_lambda_max(const Eigen::MatrixXd& dictionary, const Eigen::VectorXd& target) {
  if (dictionary.rows() != target.size())
    throw std::invalid_argument("compute_lambda_max: target length != dictionary rows");
  LambdaMax result;
  const Eigen::VectorXd corr = dictionary.transpose() * target;
  for (Eigen::Index i = 0; i < corr.size(); ++i) {
    const double a = std::abs(corr[i]);
    if (a > result.value) {
      result.value = a;
      result.index = i;
    }
  }
  return result;
}

LassoInstance make_lasso_instance(Eigen::MatrixXd dictionary, Eigen::VectorXd target,
                                  double lambda) {
  if (dictionary.rows() != target.size())
    throw std::invalid_argument("make_lasso_instance: target length != dictionary rows");
  if (!(lambda > 0.0)) throw std::invalid_argument("make_lasso_instance: lambda must be positive");
  if (!dictionary.allFinite() || !target.allFinite())
    throw std::invalid_argument("make_lasso_instance: non-finite input");

  LassoInstance inst;
  inst.column_scales.resize(dictionary.cols());
  for (Eigen::Index i = 0; i < dictionary.cols(); ++i) {
    const double nrm = dictionary.col(i).norm();
    if (nrm < 1e-12)
      throw std::invalid_argument("make_lasso_instance: zero column " + std::to_string(i));
    inst.column_scales[i] = nrm;
    dictionary.col(i) /= nrm;
  }
  inst.dictionary = std::move(dictionary);
  inst.target = std::move(target);
  inst.lambda = lambda;
  inst.lambda_max = compute_lambda_max(inst.dictionary, inst.target).value;
  return inst;
}

LassoSolution solve_lasso(const LassoInstance& inst, double tol, int max_sweeps,
                          const Eigen::VectorXd* warm_start) {
  const Eigen::Index p = inst.num_features();
  LassoSolution sol;
  sol.coefficients = warm_start ? *warm_start : Eigen::VectorXd::Zero(p);
  if (warm_start && warm_start->size() != p)
    throw std::invalid_argument("solve_lasso: warm start has wrong size");

  Eigen::VectorXd& w = sol.coefficients;
  Eigen::VectorXd residual = inst.target - inst.dictionary * w;
  const double lambda = inst.lambda;

  int sweep = 0;
  for (sweep = 0; sweep < max_sweeps; ++sweep) {
    for (Eigen::Index i = 0; i < p; ++i) {
      const double u = w[i] + inst.dictionary.col(i).dot(residual);
      const double next = soft_threshold(u, lambda);
      if (next != w[i]) {
        residual += inst.dictionary.col(i) * (w[i] - next);
        w[i] = next;
      }
    }
    // KKT in dual units: |b_i . theta| <= 1 at zeros, = sign(w_i) elsewhere.
    const Eigen::VectorXd corr = inst.dictionary.transpose() * residual / lambda;
    double kkt = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      const double v = w[i] == 0.0 ? std::max(0.0, std::abs(corr[i]) - 1.0)
                                   : std::abs(corr[i] - (w[i] > 0.0 ? 1.0 : -1.0));
      kkt = std::max(kkt, v);
    }
    sol.kkt_violation = kkt;
    if (kkt <= tol) {
      sol.converged = true;
      ++sweep;
      break;
    }
  }
  sol.iterations = sweep;
  sol.dual_point = residual / lambda;
  sol.objective = 0.5 * residual.squaredNorm() + lambda * w.lpNorm<1>();
  return sol;
}

double lasso_objective(const LassoInstance& inst, const Eigen::VectorXd& w) {
  return 0.5 * (inst.target - inst.dictionary * w).squaredNorm() +
         inst.lambda * w.lpNorm<1>();
}

double lasso_kkt_violation(const LassoInstance& inst, const Eigen::VectorXd& w) {
  const Eigen::VectorXd theta = (inst.target - inst.dictionary * w) / inst.lambda;
  const Eigen::VectorXd corr = inst.dictionary.transpose() * theta;
  double kkt = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double v = w[i] == 0.0 ? std::max(0.0, std::abs(corr[i]) - 1.0)
                                 : std::abs(corr[i] - (w[i] > 0.0 ? 1.0 : -1.0));
    kkt = std::max(kkt, v);
  }
  return kkt;
}

Eigen::VectorXd original_coefficients(const LassoInstance& inst, const Eigen::VectorXd& w) {
  return w.cwiseQuotient(inst.column_scales);
}

}  // namespace lassoscreen
