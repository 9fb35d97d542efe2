#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "lassoscreen/lasso.hpp"
#include "lassoscreen/rng.hpp"
#include "lassoscreen/synthetic.hpp"
#include "oracles.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace lassoscreen;

namespace {

LassoInstance random_instance(int n, int p, double lambda_ratio, std::uint64_t seed) {
  Rng rng(seed);
  MatrixXd b(n, p);
  for (int i = 0; i < p; ++i) b.col(i) = rng.gaussian_vector(n);
  const VectorXd x = rng.gaussian_vector(n);
  const double lmax = compute_lambda_max(
      [&] {
        MatrixXd c = b;
        for (int i = 0; i < p; ++i) c.col(i) /= c.col(i).norm();
        return c;
      }(),
      x).value;
  return make_lasso_instance(b, x, lambda_ratio * lmax);
}

}  // namespace

TEST_SUITE("lasso") {

TEST_CASE("lambda at or above lambda_max yields the zero solution") {
  for (double factor : {1.0, 1.001}) {
    LassoInstance inst = random_instance(12, 30, 1.0, 81);
    inst.lambda = factor * inst.lambda_max;
    const LassoSolution sol = solve_lasso(inst);
    CHECK(sol.converged);
    CHECK(sol.coefficients.norm() == 0.0);
  }
}

TEST_CASE("identity dictionary reduces to coordinate-wise soft thresholding") {
  Rng rng(7);
  const int n = 6;
  const VectorXd x = rng.gaussian_vector(n);
  const double lambda = 0.4;
  const LassoInstance inst = make_lasso_instance(MatrixXd::Identity(n, n), x, lambda);
  const LassoSolution sol = solve_lasso(inst, 1e-12);
  for (int i = 0; i < n; ++i) {
    const double expected =
        x[i] > lambda ? x[i] - lambda : (x[i] < -lambda ? x[i] + lambda : 0.0);
    CHECK(sol.coefficients[i] == expected);
  }
}

TEST_CASE("objective matches an independent proximal-gradient run") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const LassoInstance inst = random_instance(20, 50, 0.5, 100 + seed);
    const LassoSolution sol = solve_lasso(inst, 1e-11, 50000);
    REQUIRE(sol.converged);
    const double reference =
        testsupport::ista_lasso_objective(inst.dictionary, inst.target, inst.lambda, 400000);
    CHECK(std::abs(sol.objective - reference) <= 1e-8);
  }
}

TEST_CASE("objective is nonincreasing across coordinate sweeps") {
  const LassoInstance inst = random_instance(15, 40, 0.3, 19);
  double previous = lasso_objective(inst, VectorXd::Zero(40));
  for (int sweeps = 1; sweeps <= 12; ++sweeps) {
    // Cyclic order is deterministic, so capping sweeps exposes the prefix.
    const LassoSolution sol = solve_lasso(inst, 0.0, sweeps);
    CHECK(sol.objective <= previous + 1e-12);
    previous = sol.objective;
  }
}

TEST_CASE("converged solutions are dual feasible") {
  const LassoInstance inst = random_instance(25, 60, 0.4, 23);
  const LassoSolution sol = solve_lasso(inst, 1e-10);
  REQUIRE(sol.converged);
  const VectorXd corr = inst.dictionary.transpose() * sol.dual_point;
  CHECK(corr.cwiseAbs().maxCoeff() <= 1.0 + 1e-10);
  CHECK(sol.kkt_violation <= 1e-10);
  CHECK(lasso_kkt_violation(inst, sol.coefficients) == doctest::Approx(sol.kkt_violation));
}

TEST_CASE("warm starts converge immediately at the solution") {
  const LassoInstance inst = random_instance(15, 35, 0.5, 29);
  const LassoSolution cold = solve_lasso(inst, 1e-10);
  const LassoSolution warm = solve_lasso(inst, 1e-10, 10000, &cold.coefficients);
  CHECK(warm.converged);
  CHECK(warm.iterations <= 2);
  CHECK(warm.objective == doctest::Approx(cold.objective));
}

TEST_CASE("compute_lambda_max: exact column match and orthogonal target") {
  Rng rng(31);
  MatrixXd b(8, 10);
  for (int i = 0; i < 10; ++i) b.col(i) = rng.unit_vector(8);
  const LambdaMax lm = compute_lambda_max(b, b.col(7));
  CHECK(lm.value == doctest::Approx(1.0));
  CHECK(lm.index == 7);

  MatrixXd id2(3, 2);
  id2 << 1, 0, 0, 1, 0, 0;
  VectorXd e3(3);
  e3 << 0, 0, 1;
  CHECK(compute_lambda_max(id2, e3).value == 0.0);
}

TEST_CASE("make_lasso_instance validates input and records column scales") {
  Rng rng(37);
  MatrixXd b(5, 3);
  b.col(0) = 2.0 * rng.unit_vector(5);
  b.col(1) = 0.5 * rng.unit_vector(5);
  b.col(2) = rng.unit_vector(5);
  const VectorXd x = rng.gaussian_vector(5);
  const LassoInstance inst = make_lasso_instance(b, x, 0.1);
  CHECK(inst.column_scales[0] == doctest::Approx(2.0));
  CHECK(inst.column_scales[1] == doctest::Approx(0.5));
  for (int i = 0; i < 3; ++i) CHECK(inst.dictionary.col(i).norm() == doctest::Approx(1.0));

  const VectorXd w = VectorXd::Ones(3);
  const VectorXd orig = original_coefficients(inst, w);
  CHECK(orig[0] == doctest::Approx(0.5));
  CHECK(orig[1] == doctest::Approx(2.0));

  b.col(1).setZero();
  CHECK_THROWS_AS(make_lasso_instance(b, x, 0.1), std::invalid_argument);
  b.col(1) = rng.unit_vector(5);
  CHECK_THROWS_AS(make_lasso_instance(b, x, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_lasso_instance(b, rng.gaussian_vector(4), 0.1), std::invalid_argument);
}

TEST_CASE("synthetic instances are deterministic and well-formed") {
  const SyntheticData a = make_synthetic(30, 80, 5);
  const SyntheticData b = make_synthetic(30, 80, 5);
  CHECK(a.dictionary == b.dictionary);
  CHECK(a.target == b.target);
  for (int i = 0; i < 80; ++i) CHECK(a.dictionary.col(i).norm() == doctest::Approx(1.0));
  CHECK((a.true_coefficients.array() != 0.0).count() == 5);
}

}  // TEST_SUITE
