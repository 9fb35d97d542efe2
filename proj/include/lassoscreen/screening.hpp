#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lassoscreen/lasso.hpp"
#include "lassoscreen/region.hpp"
#include "lassoscreen/solvers.hpp"

namespace lassoscreen {

struct ScreenTiming {
  double region_seconds = 0.0;   // sphere + half-space selection + basis
  double project_seconds = 0.0;  // V^T B and residual norms
  double solve_seconds = 0.0;    // per-feature reduced solves
  double total_seconds = 0.0;
};

struct SolverStats {
  long total_iterations = 0;
  int max_iterations = 0;
  long num_solves = 0;
};

enum class ScreenStatus {
  ok,
  region_empty,  // the constructed bound is inconsistent: upstream bug, not a rejection
};

struct ScreeningReport {
  Eigen::VectorXd mu_pos;  // mu(b_i)
  Eigen::VectorXd mu_neg;  // mu(-b_i)
  std::vector<bool> rejected;
  int m_used = 0;
  Region region;
  ScreenStatus status = ScreenStatus::ok;
  double margin = 1e-9;
  ScreenTiming timing{};
  SolverStats solver_stats{};

  std::size_t rejection_count() const;
  double rejection_fraction() const;
};

struct SphereBound {
  Eigen::VectorXd center;  // q = x / lambda
  double radius = 0.0;     // (1/lambda - 1/lambda_max) ||x||
};

/// Default dual-region sphere: q = x/lambda and r = ||x/lambda - x/lambda_max||.
/// Contains the dual optimum because x/lambda_max is dual feasible and the
/// optimum is the dual-feasible point closest to x/lambda. Requires
/// 0 < lambda <= lambda_max; r = 0 iff lambda = lambda_max.
SphereBound sphere_bound(const LassoInstance& inst);

struct HalfspaceSet {
  Eigen::MatrixXd normals;                    // n x m, column k is s_k * b_{i_k}
  Eigen::VectorXd offsets;                    // all ones (dual codeword constraints)
  std::vector<Eigen::Index> feature_indices;  // selected features, by |b_i . x| descending
};

/// Picks the m features with the largest |b_i . x| (ties broken by index) and
/// turns each into the dual constraint (s_k b_{i_k}) . theta <= 1 with
/// s_k = sign(b_{i_k} . x). Requires 1 <= m < p.
HalfspaceSet greedy_halfspaces(const LassoInstance& inst, int m);

struct ScreenOptions {
  double solver_tol = 1e-9;
  double margin = 1e-9;  // rejection needs mu < 1 - margin, both signs
  int parallelism = 1;
};

/// Builds the region bound (sphere + m greedy half-spaces), projects each
/// feature once, evaluates mu(b_i) and mu(-b_i) through solve_reduced (the
/// problem is not symmetric, so -b gets its own solve), and emits the
/// rejection mask. m = 0 degrades to the pure sphere test; lambda = lambda_max
/// is the exact point-region case and is handled without solvers.
ScreeningReport screen(const LassoInstance& inst, int m, const ScreenOptions& opts = {});

struct SafetyViolation {
  Eigen::Index feature = 0;
  double mu_pos = 0.0;
  double mu_neg = 0.0;
  double coefficient = 0.0;  // nonzero w_i of a rejected feature
};

struct VerificationOutcome {
  bool passed = false;
  std::vector<SafetyViolation> violations;  // the primary regression alarm
  double full_objective = 0.0;
  double reduced_objective = 0.0;   // objective of the zero-padded reduced solution
  double padded_kkt_violation = 0.0;
  bool kkt_ok = false;
  bool objective_ok = false;
  LassoSolution full_solution;
};

/// Certifies a report against the reference lasso solver: (a) no rejected
/// feature carries a nonzero coefficient in the full solution, (b) the
/// reduced-problem solution padded with zeros satisfies the full KKT
/// conditions within lasso_tol, (c) the two objectives agree within
/// lasso_tol. A precomputed full solution may be supplied to avoid re-solving.
VerificationOutcome verify_screening(const LassoInstance& inst, const ScreeningReport& report,
                                     double lasso_tol = 1e-8,
                                     const LassoSolution* full_solution = nullptr);

}  // namespace lassoscreen
