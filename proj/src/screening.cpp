#include "lassoscreen/screening.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "lassoscreen/parallel.hpp"
#include "lassoscreen/projection.hpp"

namespace lassoscreen {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(const Clock::time_point& start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::size_t ScreeningReport::rejection_count() const {
  return static_cast<std::size_t>(std::count(rejected.begin(), rejected.end(), true));
}

double ScreeningReport::rejection_fraction() const {
  return rejected.empty() ? 0.0
                          : static_cast<double>(rejection_count()) /
                                static_cast<double>(rejected.size());
}

SphereBound sphere_bound(const LassoInstance& inst) {
  if (!(inst.lambda > 0.0))
    throw std::invalid_argument("sphere_bound: lambda must be positive");
  if (inst.lambda > inst.lambda_max * (1.0 + 1e-12))
    throw std::invalid_argument("sphere_bound: lambda above lambda_max");
  SphereBound sphere;
  sphere.center = inst.target / inst.lambda;
  sphere.radius =
      std::max(0.0, (1.0 / inst.lambda - 1.0 / inst.lambda_max) * inst.target.norm());
  return sphere;
}

HalfspaceSet greedy_halfspaces(const LassoInstance& inst, int m) {
  const Eigen::Index p = inst.num_features();
  if (m < 1 || m >= p) throw std::invalid_argument("greedy_halfspaces: need 1 <= m < p");

  const Eigen::VectorXd corr = inst.dictionary.transpose() * inst.target;
  std::vector<Eigen::Index> order(p);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double sa = std::abs(corr[a]);
    const double sb = std::abs(corr[b]);
    return sa != sb ? sa > sb : a < b;
  });

  HalfspaceSet hs;
  hs.normals.resize(inst.dim(), m);
  hs.offsets = Eigen::VectorXd::Ones(m);
  hs.feature_indices.assign(order.begin(), order.begin() + m);
  for (int k = 0; k < m; ++k) {
    const Eigen::Index i = hs.feature_indices[k];
    const double sign = corr[i] >= 0.0 ? 1.0 : -1.0;
    hs.normals.col(k) = sign * inst.dictionary.col(i);
  }
  return hs;
}

ScreeningReport screen(const LassoInstance& inst, int m, const ScreenOptions& opts) {
  const auto t_start = Clock::now();
  const Eigen::Index p = inst.num_features();
  if (m < 0 || (m > 0 && m >= p)) throw std::invalid_argument("screen: need 0 <= m < p");

  ScreeningReport report;
  report.margin = opts.margin;
  report.mu_pos.resize(p);
  report.mu_neg.resize(p);
  report.rejected.assign(p, false);
  report.m_used = m;

  const Eigen::VectorXd corr = inst.dictionary.transpose() * inst.target;
  const double reject_level = 1.0 - opts.margin;

  if (inst.lambda >= inst.lambda_max * (1.0 - 1e-12)) {
    // r = 0: the dual optimum is x/lambda_max itself and mu is exact.
    report.m_used = 0;
    report.region.center = inst.target / inst.lambda_max;
    report.region.radius = 0.0;
    report.mu_pos = corr / inst.lambda_max;
    report.mu_neg = -report.mu_pos;
    for (Eigen::Index i = 0; i < p; ++i)
      report.rejected[i] = report.mu_pos[i] < reject_level && report.mu_neg[i] < reject_level;
    report.timing.region_seconds = seconds_since(t_start);
    report.timing.total_seconds = report.timing.region_seconds;
    return report;
  }

  const SphereBound sphere = sphere_bound(inst);
  const Eigen::VectorXd q_dot_b = corr / inst.lambda;
  const double r = sphere.radius;

  if (m == 0) {
    // Pure sphere test: mu(+-b) = +-q.b + r for unit features.
    report.region = Region{sphere.center, sphere.radius, Eigen::MatrixXd(inst.dim(), 0),
                           Eigen::VectorXd(0)};
    report.mu_pos = q_dot_b.array() + r;
    report.mu_neg = -q_dot_b.array() + r;
    for (Eigen::Index i = 0; i < p; ++i)
      report.rejected[i] = report.mu_pos[i] < reject_level && report.mu_neg[i] < reject_level;
    report.timing.region_seconds = seconds_since(t_start);
    report.timing.total_seconds = report.timing.region_seconds;
    return report;
  }

  const HalfspaceSet hs = greedy_halfspaces(inst, m);
  report.region = Region{sphere.center, sphere.radius, hs.normals, hs.offsets};
  const NormalizedRegion nr = normalize(report.region);
  const ProjectionBasis basis = orthonormal_basis(nr.normals);
  const Eigen::MatrixXd& a = basis.normals_in_basis;

  // Feasibility is a per-region question and is decided in the reduced
  // space: the constraints only see V^T z.
  const NormalizedRegion reduced_nr = make_normalized_region(a.transpose(), nr.psi);
  const Feasibility feas = feasibility_check(reduced_nr, opts.solver_tol);
  report.timing.region_seconds = seconds_since(t_start);
  if (feas == Feasibility::empty) {
    // The bound must contain the dual optimum, so an empty region signals a
    // construction bug; reported as its own status rather than a rejection.
    report.status = ScreenStatus::region_empty;
    report.rejected.assign(p, true);
    report.mu_pos.setConstant(-kInf);
    report.mu_neg.setConstant(-kInf);
    report.timing.total_seconds = seconds_since(t_start);
    return report;
  }

  // Residual norms come from the explicit residual vector; the Pythagorean
  // shortcut loses half the digits near ||t|| = 1, which is exactly where the
  // selected features land.
  const auto t_project = Clock::now();
  std::vector<ProjectedFeature> projected(p);
  for (Eigen::Index i = 0; i < p; ++i) projected[i] = project(inst.dictionary.col(i), basis);
  report.timing.project_seconds = seconds_since(t_project);

  // mu must be accurate to the rejection margin after scaling by r.
  const double solver_tol = opts.solver_tol / std::max(1.0, r);

  const auto t_solve = Clock::now();
  std::vector<long> iteration_buf(p, 0);
  std::vector<int> max_iter_buf(p, 0);
  std::vector<char> certified(p, 0);
  parallel_for(p, opts.parallelism, [&](Eigen::Index i) {
    ProjectedFeature pf = projected[i];
    const SolveResult pos = solve_reduced(pf, a, nr.psi, solver_tol);
    pf.coords = -projected[i].coords;  // mu(-b) needs its own solve
    const SolveResult neg = solve_reduced(pf, a, nr.psi, solver_tol);
    report.mu_pos[i] = q_dot_b[i] + r * pos.value;
    report.mu_neg[i] = -q_dot_b[i] + r * neg.value;
    iteration_buf[i] = pos.iterations + neg.iterations;
    max_iter_buf[i] = std::max(pos.iterations, neg.iterations);
    certified[i] = pos.status != SolveStatus::iteration_limit &&
                   pos.status != SolveStatus::infeasible &&
                   neg.status != SolveStatus::iteration_limit &&
                   neg.status != SolveStatus::infeasible;
  });
  report.timing.solve_seconds = seconds_since(t_solve);

  for (Eigen::Index i = 0; i < p; ++i) {
    // An uncertified value could undershoot mu, so it never rejects.
    report.rejected[i] = certified[i] && report.mu_pos[i] < reject_level &&
                         report.mu_neg[i] < reject_level;
    report.solver_stats.total_iterations += iteration_buf[i];
    report.solver_stats.max_iterations =
        std::max(report.solver_stats.max_iterations, max_iter_buf[i]);
  }
  report.solver_stats.num_solves = 2 * p;
  report.timing.total_seconds = seconds_since(t_start);
  return report;
}

VerificationOutcome verify_screening(const LassoInstance& inst, const ScreeningReport& report,
                                     double lasso_tol, const LassoSolution* full_solution) {
  if (report.mu_pos.size() != inst.num_features())
    throw std::invalid_argument("verify_screening: report does not match instance");

  VerificationOutcome outcome;
  // Solve tighter than the certification threshold so objective agreement is
  // limited by the threshold, not by solver noise.
  const double solve_tol = 0.1 * lasso_tol;
  outcome.full_solution =
      full_solution ? *full_solution : solve_lasso(inst, solve_tol, 100000);
  const LassoSolution& full = outcome.full_solution;
  outcome.full_objective = full.objective;

  for (Eigen::Index i = 0; i < inst.num_features(); ++i) {
    if (report.rejected[i] && std::abs(full.coefficients[i]) > 0.0) {
      outcome.violations.push_back(
          {i, report.mu_pos[i], report.mu_neg[i], full.coefficients[i]});
    }
  }

  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < inst.num_features(); ++i)
    if (!report.rejected[i]) kept.push_back(i);

  Eigen::VectorXd padded = Eigen::VectorXd::Zero(inst.num_features());
  if (kept.size() == static_cast<std::size_t>(inst.num_features())) {
    padded = full.coefficients;
    outcome.reduced_objective = full.objective;
    outcome.padded_kkt_violation = full.kkt_violation;
  } else if (kept.empty()) {
    outcome.reduced_objective = lasso_objective(inst, padded);
    outcome.padded_kkt_violation = lasso_kkt_violation(inst, padded);
  } else {
    LassoInstance reduced;
    reduced.dictionary.resize(inst.dim(), static_cast<Eigen::Index>(kept.size()));
    reduced.column_scales.resize(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) {
      reduced.dictionary.col(static_cast<Eigen::Index>(j)) = inst.dictionary.col(kept[j]);
      reduced.column_scales[static_cast<Eigen::Index>(j)] = inst.column_scales[kept[j]];
    }
    reduced.target = inst.target;
    reduced.lambda = inst.lambda;
    reduced.lambda_max = compute_lambda_max(reduced.dictionary, reduced.target).value;

    const LassoSolution red = solve_lasso(reduced, solve_tol, 100000);
    for (std::size_t j = 0; j < kept.size(); ++j)
      padded[kept[j]] = red.coefficients[static_cast<Eigen::Index>(j)];
    outcome.reduced_objective = lasso_objective(inst, padded);
    outcome.padded_kkt_violation = lasso_kkt_violation(inst, padded);
  }

  outcome.kkt_ok = outcome.padded_kkt_violation <= lasso_tol;
  outcome.objective_ok =
      std::abs(outcome.full_objective - outcome.reduced_objective) <= lasso_tol;
  outcome.passed = outcome.violations.empty() && outcome.kkt_ok && outcome.objective_ok;
  return outcome;
}

}  // namespace lassoscreen
