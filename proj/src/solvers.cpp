#include "lassoscreen/solvers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lassoscreen/ball_lp.hpp"
#include "lassoscreen/errors.hpp"

namespace lassoscreen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEmptySlop = 1e-12;          // psi > 1 + slop: dome certainly empty
constexpr double kDegenerateResidual = 1e-10; // below this, b counts as in span(N)

struct DomeSplit {
  std::vector<Eigen::Index> active;  // -1 < psi < 1
  Eigen::Index pinned = -1;          // first psi in [1, 1 + slop]: dome is the point -n_k
  bool any_empty = false;
};

DomeSplit split_domes(const Eigen::VectorXd& psi) {
  DomeSplit split;
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    const double p = psi[k];
    if (p > 1.0 + kEmptySlop) {
      split.any_empty = true;
    } else if (p >= 1.0) {
      if (split.pinned < 0) split.pinned = k;
    } else if (p > -1.0) {
      split.active.push_back(k);
    }
    // psi <= -1: the half-space contains the whole ball; skippable.
  }
  return split;
}

struct CoreOutcome {
  SolveStatus status = SolveStatus::optimal;
  double value = 0.0;
  Eigen::VectorXd maximizer;
  int iterations = 0;
  double gap = 0.0;
};

CoreOutcome infeasible_outcome() {
  CoreOutcome out;
  out.status = SolveStatus::infeasible;
  out.value = -kInf;
  return out;
}

// Maximizes c . y over the unit ball intersected with {rows . y + psi <= 0}.
// Rows must be unit length (they are dome normals in the working coordinates).
CoreOutcome run_core(const Eigen::VectorXd& c, const Eigen::MatrixXd& rows,
                     const Eigen::VectorXd& psi, double tol) {
  const Eigen::Index dim = c.size();
  const DomeSplit split = split_domes(psi);

  if (split.any_empty) return infeasible_outcome();

  if (split.pinned >= 0) {
    // The pinned dome admits exactly one point; either it satisfies every
    // other constraint or the intersection is empty. Exact, no iteration.
    const Eigen::VectorXd y = -rows.row(split.pinned).transpose();
    const double worst = (rows * y + psi).maxCoeff();
    if (worst <= 1e-9 + 10.0 * tol) {
      CoreOutcome out;
      out.value = c.dot(y);
      out.maximizer = y;
      return out;
    }
    return infeasible_outcome();
  }

  if (split.active.empty()) {
    CoreOutcome out;
    out.status = SolveStatus::vacuous;
    const double cnorm = c.norm();
    out.value = cnorm;
    out.maximizer = cnorm > 0.0 ? Eigen::VectorXd(c / cnorm) : Eigen::VectorXd::Zero(dim);
    return out;
  }

  const Eigen::Index ka = static_cast<Eigen::Index>(split.active.size());
  Eigen::MatrixXd g(ka, dim);
  Eigen::VectorXd h(ka);
  for (Eigen::Index j = 0; j < ka; ++j) {
    g.row(j) = rows.row(split.active[j]);
    h[j] = psi[split.active[j]];
  }

  int steps = 0;
  Eigen::VectorXd start = Eigen::VectorXd::Zero(dim);
  double shift = 0.0;  // half-space relaxation applied for boundary-only sets
  const double v0 = h.maxCoeff();
  if (v0 >= -1e-8) {
    const auto p1 = detail::minimize_max_violation(g, h, std::min(tol, 1e-10), -1e-3, 400);
    steps += p1.newton_steps;
    if (p1.minimax_upper < 0.0) {
      start = p1.witness;
    } else if (p1.converged && p1.minimax_lower > tol) {
      return infeasible_outcome();
    } else {
      // Feasible set has (numerically) empty interior. Relax every
      // half-space just enough to admit the phase-1 witness strictly and
      // bound the induced value error through the relaxed multipliers.
      shift = p1.minimax_upper + std::max(tol, 1e-9);
      start = p1.witness;
      h.array() -= shift;
    }
  }

  detail::BarrierOptions opts;
  opts.gap_tol = tol;
  const auto res = detail::maximize_ball_polytope(c, g, h, start, opts);

  CoreOutcome out;
  out.value = res.value;
  out.maximizer = res.point;
  out.iterations = steps + res.newton_steps;
  out.gap = res.gap;
  if (shift > 0.0) out.gap += shift * res.multipliers.sum();
  out.status =
      (res.converged && out.gap <= tol) ? SolveStatus::optimal : SolveStatus::iteration_limit;
  return out;
}

SolveResult to_result(CoreOutcome&& out) {
  SolveResult res;
  res.value = out.value;
  res.maximizer = std::move(out.maximizer);
  res.status = out.status;
  res.iterations = out.iterations;
  res.kkt_residual = out.gap;
  return res;
}

void check_tol(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

}  // namespace

SolveResult solve_full(const Eigen::VectorXd& b, const NormalizedRegion& nr, double tol) {
  check_tol(tol);
  if (nr.num_halfspaces() > 0 && b.size() != nr.dim())
    throw std::invalid_argument("solve_full: dimension mismatch");
  return to_result(run_core(b, nr.normals.transpose(), nr.psi, tol));
}

SolveResult solve_reduced(const ProjectedFeature& pf, const Eigen::MatrixXd& normals_in_basis,
                          const Eigen::VectorXd& psi, double tol) {
  check_tol(tol);
  const Eigen::Index d = normals_in_basis.cols();
  if (pf.coords.size() != d)
    throw std::invalid_argument("solve_reduced: projected feature does not match basis rank");
  if (normals_in_basis.rows() != psi.size())
    throw std::invalid_argument("solve_reduced: psi size does not match normal count");

  const double scale = pf.original_norm;
  if (scale < 1e-300) {
    SolveResult res;
    res.status = SolveStatus::degenerate;
    res.maximizer = Eigen::VectorXd::Zero(d);
    return res;
  }

  // The objective is positively homogeneous in b, so work at unit norm.
  const Eigen::VectorXd t_b = pf.coords / scale;
  const double k_b = pf.residual_norm / scale;

  if (k_b < kDegenerateResidual) {
    // b lies in span(N): the k(t_z) term has zero coefficient and the
    // problem is already in core form at dimension d.
    CoreOutcome out = run_core(t_b, normals_in_basis, psi, tol);
    if (out.status == SolveStatus::optimal) out.status = SolveStatus::degenerate;
    out.value *= scale;
    out.gap *= scale;
    return to_result(std::move(out));
  }

  Eigen::VectorXd c(d + 1);
  c.head(d) = t_b;
  c[d] = k_b;
  Eigen::MatrixXd lifted_rows(normals_in_basis.rows(), d + 1);
  lifted_rows.leftCols(d) = normals_in_basis;
  lifted_rows.col(d).setZero();

  CoreOutcome out = run_core(c, lifted_rows, psi, tol);
  out.value *= scale;
  out.gap *= scale;
  if (out.maximizer.size() == d + 1)
    out.maximizer = out.maximizer.head(d).eval();
  return to_result(std::move(out));
}

SolveResult solve_lifted(const ProjectedFeature& pf, const Eigen::MatrixXd& normals_in_basis,
                         const Eigen::VectorXd& psi, double tol) {
  check_tol(tol);
  const Eigen::Index d = normals_in_basis.cols();
  if (pf.coords.size() != d)
    throw std::invalid_argument("solve_lifted: projected feature does not match basis rank");

  const double scale = pf.original_norm;
  if (scale < 1e-300 || pf.residual_norm / scale < kDegenerateResidual) {
    SolveResult res = solve_reduced(pf, normals_in_basis, psi, tol);
    if (res.status == SolveStatus::optimal) res.status = SolveStatus::degenerate;
    return res;
  }

  Eigen::VectorXd c(d + 1);
  c.head(d) = pf.coords / scale;
  c[d] = pf.residual_norm / scale;
  Eigen::MatrixXd lifted_rows(normals_in_basis.rows(), d + 1);
  lifted_rows.leftCols(d) = normals_in_basis;
  lifted_rows.col(d).setZero();

  CoreOutcome out = run_core(c, lifted_rows, psi, tol);
  out.value *= scale;
  out.gap *= scale;
  return to_result(std::move(out));
}

SolveResult solve_dual(const Eigen::VectorXd& b, const NormalizedRegion& nr, double tol) {
  check_tol(tol);
  const Eigen::Index m = nr.num_halfspaces();
  if (m > 0 && b.size() != nr.dim())
    throw std::invalid_argument("solve_dual: dimension mismatch");

  const DomeSplit split = split_domes(nr.psi);
  if (split.any_empty) {
    SolveResult res;
    res.status = SolveStatus::infeasible;
    res.value = -kInf;
    return res;
  }
  if (split.pinned >= 0) {
    // Single-point feasible set; the dual infimum equals b . (-n_k) but is
    // approached only as lambda_k grows, so report the limit directly.
    const Eigen::VectorXd z = -nr.normals.col(split.pinned);
    const double worst = (nr.normals.transpose() * z + nr.psi).maxCoeff();
    SolveResult res;
    if (worst <= 1e-9 + 10.0 * tol) {
      res.value = b.dot(z);
      res.maximizer = Eigen::VectorXd::Zero(m);
    } else {
      res.status = SolveStatus::infeasible;
      res.value = -kInf;
    }
    return res;
  }

  SolveResult res;
  res.maximizer = Eigen::VectorXd::Zero(m);
  if (split.active.empty()) {
    res.status = SolveStatus::vacuous;
    res.value = b.norm();
    return res;
  }

  const Eigen::Index ka = static_cast<Eigen::Index>(split.active.size());
  Eigen::MatrixXd n_act(b.size(), ka);
  Eigen::VectorXd psi_act(ka);
  for (Eigen::Index j = 0; j < ka; ++j) {
    n_act.col(j) = nr.normals.col(split.active[j]);
    psi_act[j] = nr.psi[split.active[j]];
  }

  // Exact cyclic coordinate minimization of ||b - N lambda|| - psi . lambda
  // over lambda >= 0. Writing the residual against coordinate k as
  // w = lambda_k - n_k . c with off-axis norm rho, the stationarity condition
  // w / sqrt(w^2 + rho^2) = psi_k has the closed root below.
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(ka);
  Eigen::VectorXd r = b;
  const int max_sweeps = 20000;
  const double unbounded_level = -b.norm() - 1.0;
  double kkt = kInf;
  double value = b.norm();
  int sweep = 0;
  for (sweep = 0; sweep < max_sweeps; ++sweep) {
    for (Eigen::Index j = 0; j < ka; ++j) {
      const Eigen::VectorXd c_vec = r + lambda[j] * n_act.col(j);
      const double a = n_act.col(j).dot(c_vec);
      const double rho = std::sqrt(std::max(0.0, c_vec.squaredNorm() - a * a));
      const double p = psi_act[j];
      const double next = std::max(0.0, a + p * rho / std::sqrt(1.0 - p * p));
      r = c_vec - next * n_act.col(j);
      lambda[j] = next;
    }
    const double rn = r.norm();
    value = rn - psi_act.dot(lambda);
    if (value < unbounded_level) {
      res.status = SolveStatus::infeasible;
      res.value = -kInf;
      res.iterations = sweep + 1;
      return res;
    }
    if (rn < 1e-12) {
      // Residual cusp: the 1-D updates are exact here, accept the iterate.
      kkt = rn;
      break;
    }
    kkt = 0.0;
    const Eigen::VectorXd corr = n_act.transpose() * (r / rn);
    for (Eigen::Index j = 0; j < ka; ++j) {
      const double grad = -corr[j] - psi_act[j];
      kkt = std::max(kkt, lambda[j] > 1e-15 ? std::abs(grad) : std::max(0.0, -grad));
    }
    if (kkt <= tol) break;
  }

  for (Eigen::Index j = 0; j < ka; ++j) res.maximizer[split.active[j]] = lambda[j];
  res.value = value;
  res.iterations = std::min(sweep + 1, max_sweeps);
  res.kkt_residual = kkt;
  res.status = kkt <= tol ? SolveStatus::optimal : SolveStatus::iteration_limit;
  return res;
}

double closed_form_one_dome(double t, double residual, double psi) {
  if (residual < 0.0 || std::abs(t * t + residual * residual - 1.0) > 1e-9)
    throw std::invalid_argument("closed_form_one_dome: (t, residual) must be unit length");
  if (psi > 1.0 + kEmptySlop)
    throw std::domain_error("closed_form_one_dome: empty dome (psi > 1)");
  const double p = std::min(psi, 1.0);
  if (t <= -p) return 1.0;  // the unconstrained optimum z = b is feasible
  return -p * t + std::sqrt(std::max(0.0, 1.0 - p * p)) * residual;
}

Feasibility feasibility_check(const NormalizedRegion& nr, double tol) {
  check_tol(tol);
  const Eigen::Index m = nr.num_halfspaces();
  if (m == 0) return Feasibility::feasible_with_interior;
  if (nr.any_empty_dome) return Feasibility::empty;

  const double at_origin = nr.psi.maxCoeff();
  if (at_origin < -tol) return Feasibility::feasible_with_interior;

  const auto p1 = detail::minimize_max_violation(nr.normals.transpose(), nr.psi, 0.5 * tol,
                                                 -tol, 400);
  if (p1.minimax_upper < -tol) return Feasibility::feasible_with_interior;
  if (p1.converged && p1.minimax_lower > tol) return Feasibility::empty;
  if (p1.converged) return Feasibility::feasible_boundary_only;
  throw NumericalError("feasibility_check: phase-1 did not resolve within its step budget");
}

}  // namespace lassoscreen
