#pragma once

#include <Eigen/Dense>
#include <limits>

namespace lassoscreen::detail {

// Shared solver core for the problem family
//     maximize  c . y   over  { y : ||y|| <= 1,  G y + h <= 0 }.
// Log-barrier interior point with damped Newton steps. The barrier Hessian is
// a scaled identity plus rank-(k+1) terms, so for large dimensions the Newton
// system is solved through the Sherman-Morrison-Woodbury identity at
// O(dim*k + k^3) per step; small systems are factored densely.

struct BarrierOptions {
  double gap_tol = 1e-9;      // target certified suboptimality
  int max_newton = 200;       // total Newton-step budget
  double t_init = 1.0;        // initial barrier parameter
  double t_growth = 10.0;     // barrier growth per outer stage
  double center_tol = 1e-11;  // inner stop: squared Newton decrement / 2
  int max_inner = 60;
};

struct BarrierResult {
  Eigen::VectorXd point;
  double value = 0.0;  // c . point (the point is feasible, so a lower bound)
  double gap = std::numeric_limits<double>::infinity();  // certified bound on optimum - value
  Eigen::VectorXd multipliers;                           // lambda >= 0, one per row of G
  double ball_multiplier = 0.0;
  int newton_steps = 0;
  bool converged = false;
};

/// Requires `start` strictly feasible (inside the ball, all slacks positive).
BarrierResult maximize_ball_polytope(const Eigen::VectorXd& objective, const Eigen::MatrixXd& G,
                                     const Eigen::VectorXd& h, const Eigen::VectorXd& start,
                                     const BarrierOptions& opts = {});

struct Phase1Result {
  // min over the ball of max_j (g_j . y + h_j) lies in [minimax_lower, minimax_upper].
  double minimax_upper = std::numeric_limits<double>::infinity();
  double minimax_lower = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd witness;  // iterate attaining minimax_upper; strictly inside the ball
  int newton_steps = 0;
  bool converged = false;  // bounds tightened to tol (false after an early exit)
};

/// Epigraph form of the feasibility subproblem, run through the same barrier
/// machinery over (y, s): minimize s subject to ||y|| <= 1, G y + h <= s.
/// Returns as soon as an iterate drops below early_exit_below.
Phase1Result minimize_max_violation(
    const Eigen::MatrixXd& G, const Eigen::VectorXd& h, double tol,
    double early_exit_below = -std::numeric_limits<double>::infinity(), int max_newton = 400);

}  // namespace lassoscreen::detail
