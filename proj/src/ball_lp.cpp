#include "lassoscreen/ball_lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lassoscreen::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest step keeping the ball strict and all slacks positive; slack
// decrease rates are linear in the step, the ball bound is the positive root
// of a quadratic.
double max_feasible_step(double yty, double y_dot_dir, double dir_sq,
                         const Eigen::VectorXd& slack, const Eigen::VectorXd& slack_rate) {
  double step = kInf;
  const double a = dir_sq;
  if (a > 0.0) {
    const double bq = 2.0 * y_dot_dir;
    const double cq = yty - 1.0;  // < 0 strictly inside
    const double disc = std::max(0.0, bq * bq - 4.0 * a * cq);
    step = (-bq + std::sqrt(disc)) / (2.0 * a);
  }
  for (Eigen::Index j = 0; j < slack.size(); ++j) {
    if (slack_rate[j] > 0.0) step = std::min(step, slack[j] / slack_rate[j]);
  }
  return step;
}

// H = alpha I + U diag(w) U^T with U = [y | G^T]; returns H^{-1} v through
// the Woodbury identity. `gram` is G G^T, `gy` is G y.
Eigen::VectorXd woodbury_solve(double alpha, const Eigen::VectorXd& y, const Eigen::MatrixXd& G,
                               const Eigen::MatrixXd& gram, const Eigen::VectorXd& gy,
                               const Eigen::VectorXd& w, const Eigen::VectorXd& v) {
  const Eigen::Index k = G.rows();
  Eigen::MatrixXd m(k + 1, k + 1);
  m(0, 0) = y.squaredNorm() / alpha;
  m.block(0, 1, 1, k) = gy.transpose() / alpha;
  m.block(1, 0, k, 1) = gy / alpha;
  m.bottomRightCorner(k, k) = gram / alpha;
  m.diagonal() += w.cwiseInverse();

  Eigen::VectorXd uv(k + 1);
  uv[0] = y.dot(v);
  uv.tail(k) = G * v;
  const Eigen::VectorXd z = m.ldlt().solve(uv);
  return v / alpha - (y * z[0] + G.transpose() * z.tail(k)) / (alpha * alpha);
}

// Feasible/dual candidate bookkeeping. Any lambda >= 0 certifies the upper
// bound ||c - G^T lambda|| - h . lambda regardless of centering quality, so
// the final gap is measured rather than taken from path-following theory.
struct Certificates {
  double best_lower = -kInf;
  Eigen::VectorXd best_point;
  double best_upper = kInf;
  Eigen::VectorXd best_multipliers;

  void offer_lower(double lower, const Eigen::VectorXd& y) {
    if (lower > best_lower) {
      best_lower = lower;
      best_point = y;
    }
  }
  void offer_upper(double upper, const Eigen::VectorXd& lambda) {
    if (upper < best_upper) {
      best_upper = upper;
      best_multipliers = lambda;
    }
  }
  double gap() const { return std::max(0.0, best_upper - best_lower); }
};

double dual_bound(const Eigen::VectorXd& c, const Eigen::MatrixXd& G, const Eigen::VectorXd& h,
                  const Eigen::VectorXd& lambda) {
  return (c - G.transpose() * lambda).norm() - h.dot(lambda);
}

// Exact solve on a candidate active set: equalities G_A y = -h_A plus the
// ball. The maximizer is the minimum-norm point on the active hyperplanes
// moved along the projected objective; KKT multipliers come from a least
// squares fit and feed the measured dual bound.
void try_active_sets(const Eigen::VectorXd& c, const Eigen::MatrixXd& G,
                     const Eigen::VectorXd& h, const Eigen::VectorXd& lambda_est,
                     Certificates& certs) {
  const Eigen::Index k = G.rows();
  const Eigen::Index dim = c.size();
  std::vector<Eigen::Index> order(k);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return lambda_est[a] > lambda_est[b]; });

  for (Eigen::Index r = 0; r <= k; ++r) {
    Eigen::VectorXd y;
    Eigen::MatrixXd ga_t(dim, r);
    Eigen::VectorXd ha(r);
    for (Eigen::Index j = 0; j < r; ++j) {
      ga_t.col(j) = G.row(order[j]).transpose();
      ha[j] = h[order[j]];
    }
    if (r == 0) {
      const double cn = c.norm();
      if (cn < 1e-300) continue;
      y = c / cn;
    } else {
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(ga_t.transpose());
      const Eigen::VectorXd y0 = cod.solve(-ha);
      if ((ga_t.transpose() * y0 + ha).cwiseAbs().maxCoeff() > 1e-10) continue;
      const double y0_sq = y0.squaredNorm();
      if (y0_sq > 1.0 + 1e-12) continue;
      // Projected objective: least-squares residual against the active rows.
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_t(ga_t);
      const Eigen::VectorXd fit = cod_t.solve(c);
      const Eigen::VectorXd proj = c - ga_t * fit;
      const double pn = proj.norm();
      const double rho = std::sqrt(std::max(0.0, 1.0 - y0_sq));
      y = pn > 1e-14 ? Eigen::VectorXd(y0 + (rho / pn) * proj) : y0;
    }
    const double norm_y = y.norm();
    if (norm_y > 1.0) y /= norm_y;
    const double violation = k > 0 ? (G * y + h).maxCoeff() : 0.0;
    if (violation > 1e-12) continue;
    certs.offer_lower(c.dot(y), y);

    // Stationarity fit: c = 2 nu y + G_A^T lambda with nu, lambda >= 0.
    // Complementary slackness zeroes the ball multiplier when the ball is
    // inactive, so its column is only offered when ||y|| sits on the sphere.
    const bool ball_active = y.squaredNorm() > 1.0 - 1e-9;
    const Eigen::Index cols = r + (ball_active ? 1 : 0);
    if (cols == 0) continue;
    Eigen::MatrixXd basis(dim, cols);
    if (ball_active) basis.col(0) = 2.0 * y;
    basis.rightCols(r) = ga_t;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_kkt(basis);
    Eigen::VectorXd coef = cod_kkt.solve(c);
    Eigen::VectorXd lambda_full = Eigen::VectorXd::Zero(k);
    const Eigen::Index lambda_offset = ball_active ? 1 : 0;
    for (Eigen::Index j = 0; j < r; ++j)
      lambda_full[order[j]] = std::max(0.0, coef[lambda_offset + j]);
    certs.offer_upper(dual_bound(c, G, h, lambda_full), lambda_full);
  }
}

}  // namespace

BarrierResult maximize_ball_polytope(const Eigen::VectorXd& objective, const Eigen::MatrixXd& G,
                                     const Eigen::VectorXd& h, const Eigen::VectorXd& start,
                                     const BarrierOptions& opts) {
  const Eigen::Index dim = objective.size();
  const Eigen::Index k = G.rows();
  if (G.cols() != dim || h.size() != k || start.size() != dim || k < 1)
    throw std::invalid_argument("maximize_ball_polytope: inconsistent shapes");
  {
    const double sigma0 = 1.0 - start.squaredNorm();
    const Eigen::VectorXd slack0 = -(G * start + h);
    if (sigma0 <= 0.0 || slack0.minCoeff() <= 0.0)
      throw std::invalid_argument("maximize_ball_polytope: start not strictly feasible");
  }

  const Eigen::MatrixXd gram = G * G.transpose();

  Eigen::VectorXd y = start;
  double t = opts.t_init;
  const double n_terms = static_cast<double>(k) + 1.0;
  int steps = 0;
  bool out_of_budget = false;
  Certificates certs;
  certs.offer_lower(objective.dot(y), y);

  auto stage_certificates = [&]() {
    const Eigen::VectorXd slack = -(G * y + h);
    certs.offer_lower(objective.dot(y), y);
    if (slack.minCoeff() > 0.0) {
      const Eigen::VectorXd lambda = (t * slack.array()).inverse().matrix();
      certs.offer_upper(dual_bound(objective, G, h, lambda), lambda);
    }
  };

  // Path-following stops at a moderate barrier parameter; the active-set
  // polish below closes the remaining gap without driving the Hessian into
  // the ill-conditioned extreme-t regime.
  const double coarse_gap = std::max(opts.gap_tol, 1e-6);
  for (int round = 0; round < 2 && !out_of_budget; ++round) {
    const double target = round == 0 ? coarse_gap : opts.gap_tol;
    while (n_terms / t > target) {
      double prev_dec2 = kInf;
      for (int inner = 0; inner < opts.max_inner; ++inner) {
        if (steps >= opts.max_newton) {
          out_of_budget = true;
          break;
        }
        const double yty = y.squaredNorm();
        const double sigma = 1.0 - yty;
        const Eigen::VectorXd gy = G * y;
        const Eigen::VectorXd slack = -(gy + h);
        const Eigen::VectorXd inv_slack = slack.cwiseInverse();
        const Eigen::VectorXd grad =
            -t * objective + (2.0 / sigma) * y + G.transpose() * inv_slack;

        const double alpha = 2.0 / sigma;
        Eigen::VectorXd w(k + 1);
        w[0] = 4.0 / (sigma * sigma);
        w.tail(k) = inv_slack.cwiseAbs2();
        Eigen::VectorXd dir = -woodbury_solve(alpha, y, G, gram, gy, w, grad);
        double dec2 = -grad.dot(dir);
        if (!std::isfinite(dec2) || dec2 <= 0.0) {  // factorization breakdown
          dir = -grad / alpha;
          dec2 = grad.squaredNorm() / alpha;
        }
        // The decrement contracts quadratically once small, so a stalled
        // small value is the floating-point noise floor.
        if (dec2 / 2.0 <= opts.center_tol || (dec2 < 1e-6 && dec2 > 0.5 * prev_dec2)) break;
        prev_dec2 = dec2;

        const Eigen::VectorXd gdir = G * dir;
        const double y_dot_dir = y.dot(dir);
        const double dir_sq = dir.squaredNorm();
        const double c_dot_y = objective.dot(y);
        const double c_dot_dir = objective.dot(dir);
        const double f0 = -t * c_dot_y - std::log(sigma) - slack.array().log().sum();
        auto f_at = [&](double s) {
          const double sig = 1.0 - (yty + 2.0 * s * y_dot_dir + s * s * dir_sq);
          if (sig <= 0.0) return kInf;
          double logsum = 0.0;
          for (Eigen::Index j = 0; j < k; ++j) {
            const double d = slack[j] - s * gdir[j];
            if (d <= 0.0) return kInf;
            logsum += std::log(d);
          }
          return -t * (c_dot_y + s * c_dot_dir) - std::log(sig) - logsum;
        };

        double step =
            std::min(1.0, 0.99 * max_feasible_step(yty, y_dot_dir, dir_sq, slack, gdir));
        int halvings = 0;
        while (halvings < 80 && f_at(step) > f0 - 0.25 * step * dec2) {
          step *= 0.5;
          ++halvings;
        }
        if (halvings >= 80) break;
        y += step * dir;
        ++steps;
      }
      if (out_of_budget) break;
      stage_certificates();
      if (certs.gap() <= opts.gap_tol) break;
      t *= opts.t_growth;
    }
    if (certs.gap() <= opts.gap_tol) break;
    const Eigen::VectorXd slack = -(G * y + h);
    try_active_sets(objective, G, h, (t * slack.array()).inverse().matrix(), certs);
    if (certs.gap() <= opts.gap_tol) break;
  }

  BarrierResult result;
  result.point = certs.best_point;
  result.value = certs.best_lower;
  result.gap = certs.gap();
  result.newton_steps = steps;
  result.converged = result.gap <= opts.gap_tol;
  if (certs.best_multipliers.size() == k) {
    result.multipliers = certs.best_multipliers;
  } else {
    result.multipliers = Eigen::VectorXd::Zero(k);
  }
  const double sigma = 1.0 - result.point.squaredNorm();
  result.ball_multiplier = sigma > 0.0 ? 1.0 / (t * sigma) : 0.0;
  return result;
}

Phase1Result minimize_max_violation(const Eigen::MatrixXd& G, const Eigen::VectorXd& h,
                                    double tol, double early_exit_below, int max_newton) {
  const Eigen::Index dim = G.cols();
  const Eigen::Index k = G.rows();
  if (h.size() != k || k < 1)
    throw std::invalid_argument("minimize_max_violation: inconsistent shapes");

  const Eigen::MatrixXd gram = G * G.transpose();

  Eigen::VectorXd y = Eigen::VectorXd::Zero(dim);
  double sv = h.maxCoeff() + 1.0;  // strictly feasible epigraph start at y = 0

  Phase1Result result;
  result.witness = y;
  result.minimax_upper = h.maxCoeff();  // max violation at y = 0

  double t = 1.0;
  const double n_terms = static_cast<double>(k) + 1.0;
  int steps = 0;
  bool out_of_budget = false;

  auto note_iterate = [&](const Eigen::VectorXd& yy, const Eigen::VectorXd& gyy) {
    const double v = (gyy + h).maxCoeff();
    if (v < result.minimax_upper) {
      result.minimax_upper = v;
      result.witness = yy;
    }
  };
  // For any weights mu >= 0 summing to one, the minimax value is at least
  // h . mu - ||G^T mu|| (minimize the averaged constraint over the ball), so
  // the lower bound is measured rather than inferred from centering.
  auto note_lower = [&]() {
    const Eigen::VectorXd slack = Eigen::VectorXd::Constant(k, sv) - G * y - h;
    if (slack.minCoeff() <= 0.0) return;
    Eigen::VectorXd mu = slack.cwiseInverse();
    mu /= mu.sum();
    result.minimax_lower =
        std::max(result.minimax_lower, h.dot(mu) - (G.transpose() * mu).norm());
  };

  for (;;) {
    double prev_dec2 = kInf;
    for (int inner = 0; inner < 60; ++inner) {
      if (steps >= max_newton) {
        out_of_budget = true;
        break;
      }
      const double yty = y.squaredNorm();
      const double sigma = 1.0 - yty;
      const Eigen::VectorXd gy = G * y;
      const Eigen::VectorXd slack = (Eigen::VectorXd::Constant(k, sv) - gy - h);
      const Eigen::VectorXd inv_slack = slack.cwiseInverse();
      const Eigen::VectorXd inv_slack2 = inv_slack.cwiseAbs2();

      const Eigen::VectorXd grad_y = (2.0 / sigma) * y + G.transpose() * inv_slack;
      const double grad_s = t - inv_slack.sum();

      const double alpha = 2.0 / sigma;
      Eigen::VectorXd w(k + 1);
      w[0] = 4.0 / (sigma * sigma);
      w.tail(k) = inv_slack2;
      const Eigen::VectorXd hys = -(G.transpose() * inv_slack2);
      const double hss = inv_slack2.sum();
      // Block elimination: Schur complement on the scalar epigraph variable.
      const Eigen::VectorXd u = woodbury_solve(alpha, y, G, gram, gy, w, grad_y);
      const Eigen::VectorXd v2 = woodbury_solve(alpha, y, G, gram, gy, w, hys);
      const double schur = hss - hys.dot(v2);
      double dir_s = (hys.dot(u) - grad_s) / (schur > 0.0 ? schur : 1.0);
      Eigen::VectorXd dir_y = -u - v2 * dir_s;
      double dec2 = -(grad_y.dot(dir_y) + grad_s * dir_s);
      if (!std::isfinite(dec2) || dec2 <= 0.0) {
        dir_y = -grad_y / alpha;
        dir_s = -grad_s;
        dec2 = grad_y.squaredNorm() / alpha + grad_s * grad_s;
      }
      if (dec2 / 2.0 <= 1e-11 || (dec2 < 1e-6 && dec2 > 0.5 * prev_dec2)) break;
      prev_dec2 = dec2;

      const Eigen::VectorXd gdir = G * dir_y;
      const Eigen::VectorXd slack_rate = gdir - Eigen::VectorXd::Constant(k, dir_s);
      const double y_dot_dir = y.dot(dir_y);
      const double dir_sq = dir_y.squaredNorm();
      const double f0 = t * sv - std::log(sigma) - slack.array().log().sum();
      auto f_at = [&](double s) {
        const double sig = 1.0 - (yty + 2.0 * s * y_dot_dir + s * s * dir_sq);
        if (sig <= 0.0) return kInf;
        double logsum = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
          const double d = slack[j] - s * slack_rate[j];
          if (d <= 0.0) return kInf;
          logsum += std::log(d);
        }
        return t * (sv + s * dir_s) - std::log(sig) - logsum;
      };

      double step =
          std::min(1.0, 0.99 * max_feasible_step(yty, y_dot_dir, dir_sq, slack, slack_rate));
      int halvings = 0;
      while (halvings < 80 && f_at(step) > f0 - 0.25 * step * dec2) {
        step *= 0.5;
        ++halvings;
      }
      if (halvings >= 80) break;
      y += step * dir_y;
      sv += step * dir_s;
      ++steps;
      note_iterate(y, G * y);
      if (result.minimax_upper < early_exit_below) {
        result.newton_steps = steps;
        return result;  // caller only needed a strictly feasible point
      }
    }
    if (out_of_budget) break;
    note_lower();
    if (result.minimax_upper - result.minimax_lower <= tol) break;
    if (n_terms / t <= 0.01 * tol) break;  // measured bounds failed to close
    t *= 10.0;
  }

  result.newton_steps = steps;
  result.converged = result.minimax_upper - result.minimax_lower <= tol;
  return result;
}

}  // namespace lassoscreen::detail
