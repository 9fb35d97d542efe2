#pragma once

#include <Eigen/Dense>

#include "lassoscreen/projection.hpp"
#include "lassoscreen/region.hpp"

namespace lassoscreen {

enum class SolveStatus {
  optimal,
  infeasible,       // feasible set certified empty; value is -inf
  vacuous,          // every half-space contains the whole ball
  degenerate,       // b numerically in the span of the normals
  iteration_limit,  // budget exhausted; value/kkt_residual describe the best iterate
};

struct SolveResult {
  double value = 0.0;
  Eigen::VectorXd maximizer;  // z, t_z, t_z^e or lambda depending on the formulation
  SolveStatus status = SolveStatus::optimal;
  int iterations = 0;
  double kkt_residual = 0.0;  // certified suboptimality of `value`
};

enum class Feasibility { feasible_with_interior, feasible_boundary_only, empty };

/// mu_bar(b) = max b . z over the unit ball intersected with the domes,
/// solved in the full n-dimensional space.
SolveResult solve_full(const Eigen::VectorXd& b, const NormalizedRegion& nr, double tol = 1e-9);

/// The d-dimensional reformulation: max t . t_b + k(t) k(t_b) subject to
/// A t + psi <= 0, ||t|| <= 1, with k(x) = sqrt(1 - ||x||^2). Implemented by
/// lifting to the (d+1)-dimensional form, solving, and projecting back.
/// Features of any positive norm are accepted (the objective is positively
/// homogeneous in b); when the residual norm is below 1e-10 the k-term is
/// dropped and status degenerate is returned.
SolveResult solve_reduced(const ProjectedFeature& pf, const Eigen::MatrixXd& normals_in_basis,
                          const Eigen::VectorXd& psi, double tol = 1e-9);

/// The (d+1)-dimensional form: max t_e . t_b^e over ||t_e|| <= 1,
/// [A 0] t_e + psi <= 0 with t_b^e = (t_b, k(t_b)). Requires b outside the
/// normal span; otherwise delegates to solve_reduced (status degenerate).
SolveResult solve_lifted(const ProjectedFeature& pf, const Eigen::MatrixXd& normals_in_basis,
                         const Eigen::VectorXd& psi, double tol = 1e-9);

/// Lagrangian dual oracle: mu_bar(b) = min over lambda >= 0 of
/// ||b - N lambda|| - psi . lambda, minimized by exact cyclic coordinate
/// descent. Always an upper bound on solve_full; equal under a strictly
/// feasible region (Slater). The dual variable is returned in `maximizer`.
SolveResult solve_dual(const Eigen::VectorXd& b, const NormalizedRegion& nr, double tol = 1e-9);

/// m = 1 closed form for a unit-norm feature split as (t, residual) against
/// the dome normal: 1 if t <= -psi, else -psi*t + sqrt(1-psi^2)*residual.
/// Throws std::domain_error when the dome is empty (psi > 1) and
/// std::invalid_argument when t^2 + residual^2 is not 1 within 1e-9.
double closed_form_one_dome(double t, double residual, double psi);

/// Classifies the feasible set by solving min over the ball of
/// max_k (n_k . z + psi_k): negative optimum => interior, zero within tol
/// => boundary only, positive => empty.
Feasibility feasibility_check(const NormalizedRegion& nr, double tol = 1e-9);

}  // namespace lassoscreen
