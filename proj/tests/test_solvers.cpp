#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "lassoscreen/projection.hpp"
#include "lassoscreen/region.hpp"
#include "lassoscreen/rng.hpp"
#include "lassoscreen/solvers.hpp"
#include "oracles.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace lassoscreen;

namespace {

VectorXd unit(int n, int axis) {
  VectorXd e = VectorXd::Zero(n);
  e[axis] = 1.0;
  return e;
}

NormalizedRegion region_of(MatrixXd normals, VectorXd psi) {
  return make_normalized_region(std::move(normals), std::move(psi));
}

ProjectedFeature scalar_feature(double t, double residual) {
  ProjectedFeature pf;
  pf.coords = VectorXd::Constant(1, t);
  pf.residual_norm = residual;
  pf.original_norm = std::sqrt(t * t + residual * residual);
  return pf;
}

}  // namespace

TEST_SUITE("solvers") {

TEST_CASE("closed_form_one_dome: anchor values") {
  CHECK(closed_form_one_dome(-1.0, 0.0, 0.0) == doctest::Approx(1.0));
  CHECK(closed_form_one_dome(0.6, 0.8, 0.0) == doctest::Approx(0.8));
  CHECK(closed_form_one_dome(0.3, std::sqrt(1.0 - 0.09), -1.5) == doctest::Approx(1.0));
  CHECK(closed_form_one_dome(0.3, std::sqrt(1.0 - 0.09), 1.0) == doctest::Approx(-0.3));
  CHECK_THROWS_AS(closed_form_one_dome(0.6, 0.8, 1.5), std::domain_error);
  CHECK_THROWS_AS(closed_form_one_dome(0.6, 0.6, 0.0), std::invalid_argument);
}

TEST_CASE("closed_form_one_dome agrees with solve_reduced on random triples") {
  Rng rng(2024);
  MatrixXd a(1, 1);
  a << 1.0;
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const double t = rng.uniform(-1.0, 1.0);
    const double residual = std::sqrt(std::max(0.0, 1.0 - t * t));
    const double psi = rng.uniform(-1.5, 1.0);
    const double closed = closed_form_one_dome(t, residual, psi);
    const SolveResult red = solve_reduced(scalar_feature(t, residual),
                                          a, VectorXd::Constant(1, psi), 1e-10);
    worst = std::max(worst, std::abs(closed - red.value));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("solve_full: vacuous half-spaces reduce to the plain ball maximum") {
  Rng rng(3);
  const VectorXd b = rng.unit_vector(4);
  const auto nr = region_of(rng.unit_vector(4), VectorXd::Constant(1, -1.5));
  const SolveResult res = solve_full(b, nr);
  CHECK(res.status == SolveStatus::vacuous);
  CHECK(res.value == doctest::Approx(1.0));
  CHECK((res.maximizer - b).norm() <= 1e-12);
}

TEST_CASE("solve_full: objective along the dome normal with psi = 0 maxes at zero") {
  Rng rng(4);
  const VectorXd n1 = rng.unit_vector(5);
  const auto nr = region_of(n1, VectorXd::Zero(1));
  const SolveResult res = solve_full(n1, nr, 1e-10);
  CHECK(res.status == SolveStatus::optimal);
  CHECK(std::abs(res.value) <= 1e-8);
}

TEST_CASE("solve_full agrees with the dual oracle on a small random instance") {
  const auto ti = testsupport::make_instance(4, 2, 99);
  Rng rng(5);
  const VectorXd b = rng.unit_vector(4);
  const SolveResult full = solve_full(b, ti.nr, 1e-9);
  const SolveResult dual = solve_dual(b, ti.nr, 1e-9);
  REQUIRE(full.status == SolveStatus::optimal);
  REQUIRE(dual.status == SolveStatus::optimal);
  CHECK(std::abs(full.value - dual.value) <= 1e-6);
}

TEST_CASE("solve_full: contradictory half-spaces are reported infeasible") {
  MatrixXd n(3, 2);
  n.col(0) = unit(3, 0);
  n.col(1) = -unit(3, 0);
  const auto nr = region_of(n, VectorXd::Constant(2, 0.5));
  const SolveResult res = solve_full(unit(3, 1), nr);
  CHECK(res.status == SolveStatus::infeasible);
  CHECK(res.value == -std::numeric_limits<double>::infinity());
}

TEST_CASE("solve_full: a dome pinned at psi = 1 fixes the maximizer exactly") {
  Rng rng(6);
  const VectorXd n1 = rng.unit_vector(6);
  const VectorXd b = rng.unit_vector(6);
  const auto nr = region_of(n1, VectorXd::Ones(1));
  const SolveResult res = solve_full(b, nr);
  CHECK(res.status == SolveStatus::optimal);
  CHECK(res.value == doctest::Approx(-n1.dot(b)));
  CHECK((res.maximizer + n1).norm() <= 1e-12);
}

TEST_CASE("solve_full: opposing half-spaces with zero offsets (boundary-only slab)") {
  Rng rng(7);
  MatrixXd n(5, 2);
  n.col(0) = unit(5, 0);
  n.col(1) = -unit(5, 0);
  const auto nr = region_of(n, VectorXd::Zero(2));
  const VectorXd b = rng.unit_vector(5);
  const SolveResult res = solve_full(b, nr, 1e-9);
  const double expected = b.tail(4).norm();  // max over the disk z_0 = 0
  CHECK(std::abs(res.value - expected) <= 1e-6);
}

TEST_CASE("solve_full: zero objective is optimal at zero value") {
  const auto ti = testsupport::make_instance(5, 2, 123);
  const SolveResult res = solve_full(VectorXd::Zero(5), ti.nr);
  CHECK(std::abs(res.value) <= 1e-9);
}

TEST_CASE("solve_reduced: vacuous constraints return the feature norm") {
  MatrixXd a(1, 1);
  a << 1.0;
  ProjectedFeature pf = scalar_feature(0.6, 0.8);
  const SolveResult res = solve_reduced(pf, a, VectorXd::Constant(1, -2.0));
  CHECK(res.status == SolveStatus::vacuous);
  CHECK(res.value == doctest::Approx(1.0));
}

TEST_CASE("solve_reduced: one-dome anchor instance") {
  MatrixXd a(1, 1);
  a << 1.0;
  const SolveResult res = solve_reduced(scalar_feature(0.6, 0.8), a, VectorXd::Zero(1), 1e-10);
  CHECK(res.status == SolveStatus::optimal);
  CHECK(std::abs(res.value - 0.8) <= 1e-9);
  CHECK(std::abs(res.maximizer[0]) <= 1e-4);  // optimum sits on the dome base
}

TEST_CASE("solve_reduced: feature inside the normal span takes the degenerate path") {
  const auto ti = testsupport::make_instance(6, 2, 42);
  const VectorXd b = ti.nr.normals.col(0);
  const ProjectedFeature pf = project(b, ti.basis);
  REQUIRE(pf.residual_norm < 1e-10);
  const SolveResult red = solve_reduced(pf, ti.basis.normals_in_basis, ti.nr.psi, 1e-9);
  const SolveResult full = solve_full(b, ti.nr, 1e-9);
  CHECK(red.status == SolveStatus::degenerate);
  CHECK(std::abs(red.value - full.value) <= 1e-6);
}

TEST_CASE("solve_reduced: non-unit features scale by positive homogeneity") {
  const auto ti = testsupport::make_instance(5, 2, 77);
  Rng rng(8);
  const VectorXd b = 3.7 * rng.unit_vector(5);
  const ProjectedFeature pf = project(b, ti.basis);
  const SolveResult red = solve_reduced(pf, ti.basis.normals_in_basis, ti.nr.psi, 1e-9);
  const SolveResult full = solve_full(b, ti.nr, 1e-9);
  CHECK(std::abs(red.value - full.value) <= 1e-6 * 3.7);
}

TEST_CASE("solve_lifted matches solve_reduced and delegates when b is in the span") {
  MatrixXd a(1, 1);
  a << 1.0;
  const SolveResult lift = solve_lifted(scalar_feature(0.6, 0.8), a, VectorXd::Zero(1), 1e-10);
  CHECK(lift.status == SolveStatus::optimal);
  CHECK(std::abs(lift.value - 0.8) <= 1e-9);
  CHECK(lift.maximizer.size() == 2);

  const SolveResult degenerate =
      solve_lifted(scalar_feature(1.0, 0.0), a, VectorXd::Zero(1), 1e-10);
  CHECK(degenerate.status == SolveStatus::degenerate);
  CHECK(std::abs(degenerate.value - 0.0) <= 1e-9);
}

TEST_CASE("solve_lifted: vacuous constraints give the unit objective norm") {
  MatrixXd a(1, 1);
  a << 1.0;
  const SolveResult res = solve_lifted(scalar_feature(0.6, 0.8), a, VectorXd::Constant(1, -1.0));
  CHECK(res.status == SolveStatus::vacuous);
  CHECK(res.value == doctest::Approx(1.0));
}

TEST_CASE("solve_lifted: the lifted problem fed back through solve_full is identical") {
  for (std::uint64_t seed : {301u, 302u, 303u}) {
    const auto ti = testsupport::make_instance(9, 3, seed);
    Rng rng(1000 + seed);
    const VectorXd b = rng.unit_vector(9);
    const ProjectedFeature pf = project(b, ti.basis);
    if (pf.residual_norm < 1e-10) continue;
    const Eigen::Index d = ti.basis.rank;

    const SolveResult lifted = solve_lifted(pf, ti.basis.normals_in_basis, ti.nr.psi, 1e-10);

    // Same optimization expressed as a normalized region at dimension d+1:
    // the lifted constraint rows are unit vectors, so the shape matches.
    MatrixXd lifted_normals(d + 1, ti.nr.psi.size());
    lifted_normals.topRows(d) = ti.basis.normals_in_basis.transpose();
    lifted_normals.bottomRows(1).setZero();
    VectorXd b_e(d + 1);
    b_e.head(d) = pf.coords;
    b_e[d] = pf.residual_norm;
    const SolveResult via_full = solve_full(b_e, region_of(lifted_normals, ti.nr.psi), 1e-10);

    CHECK(std::abs(lifted.value - via_full.value) <= 1e-8);
  }
}

TEST_CASE("solve_dual: vacuous constraints give lambda = 0 and the objective norm") {
  Rng rng(9);
  const VectorXd b = 2.0 * rng.unit_vector(6);
  const auto nr = region_of(rng.unit_vector(6), VectorXd::Constant(1, -1.2));
  const SolveResult res = solve_dual(b, nr);
  CHECK(res.status == SolveStatus::vacuous);
  CHECK(res.value == doctest::Approx(2.0));
  CHECK(res.maximizer.norm() == 0.0);
}

TEST_CASE("solve_dual: objective along the normal with psi = 0") {
  Rng rng(10);
  const VectorXd n1 = rng.unit_vector(4);
  const auto nr = region_of(n1, VectorXd::Zero(1));
  const SolveResult res = solve_dual(n1, nr, 1e-10);
  CHECK(std::abs(res.value) <= 1e-10);
  CHECK(res.maximizer[0] == doctest::Approx(1.0));
}

TEST_CASE("solve_dual: empty dome flagged infeasible") {
  const auto nr = region_of(unit(3, 0), VectorXd::Constant(1, 1.5));
  CHECK(solve_dual(unit(3, 1), nr).status == SolveStatus::infeasible);
}

TEST_CASE("feasibility_check: anchor classifications") {
  Rng rng(11);
  MatrixXd n(4, 2);
  n.col(0) = rng.unit_vector(4);
  n.col(1) = rng.unit_vector(4);
  CHECK(feasibility_check(region_of(n, VectorXd::Constant(2, -1.0))) ==
        Feasibility::feasible_with_interior);

  CHECK(feasibility_check(region_of(rng.unit_vector(4), VectorXd::Ones(1))) ==
        Feasibility::feasible_boundary_only);

  MatrixXd opp(3, 2);
  opp.col(0) = unit(3, 0);
  opp.col(1) = -unit(3, 0);
  CHECK(feasibility_check(region_of(opp, VectorXd::Constant(2, 0.5))) == Feasibility::empty);
}

TEST_CASE("property: the four formulations agree on random feasible instances") {
  Rng rng(1234);
  double worst_reduced = 0.0;
  double worst_lifted = 0.0;
  double worst_dual = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = trial % 2 == 0 ? 5 : 12;
    const int m = 1 + trial % 4;
    const auto ti = testsupport::make_instance(n, m, 7000 + trial);
    const VectorXd b = rng.unit_vector(n);
    const ProjectedFeature pf = project(b, ti.basis);

    const SolveResult full = solve_full(b, ti.nr, 1e-9);
    const SolveResult red = solve_reduced(pf, ti.basis.normals_in_basis, ti.nr.psi, 1e-9);
    const SolveResult lift = solve_lifted(pf, ti.basis.normals_in_basis, ti.nr.psi, 1e-9);
    const SolveResult dual = solve_dual(b, ti.nr, 1e-9);

    worst_reduced = std::max(worst_reduced, std::abs(red.value - full.value));
    worst_lifted = std::max(worst_lifted, std::abs(lift.value - full.value));
    worst_dual = std::max(worst_dual, std::abs(dual.value - full.value));
    CHECK(full.value <= b.norm() + 1e-9);
    CHECK(dual.value >= full.value - 1e-6);  // weak duality up to solver noise
    for (const SolveResult* r : {&full, &red, &lift, &dual}) {
      if (r->status == SolveStatus::optimal) CHECK(r->kkt_residual <= 1e-9);
    }
  }
  CHECK(worst_reduced <= 1e-6);
  CHECK(worst_lifted <= 1e-6);
  CHECK(worst_dual <= 1e-6);
}

TEST_CASE("property: mu_bar is invariant under the normal-fixing group") {
  Rng rng(4321);
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto ti = testsupport::make_instance(7, 2, 9000 + trial);
    const MatrixXd r = testsupport::random_group_element(ti.basis, rng);
    const VectorXd b = rng.unit_vector(7);
    const SolveResult base = solve_full(b, ti.nr, 1e-9);
    const SolveResult rotated = solve_full(r * b, ti.nr, 1e-9);
    worst = std::max(worst, std::abs(rotated.value - base.value));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("property: jointly rotating the problem and the feature changes nothing") {
  Rng rng(555);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto ti = testsupport::make_instance(6, 2, 11000 + trial);
    const MatrixXd q = testsupport::random_orthogonal(6, rng);
    const VectorXd b = rng.unit_vector(6);
    const SolveResult base = solve_full(b, ti.nr, 1e-9);
    const auto rotated_nr = region_of(q * ti.nr.normals, ti.nr.psi);
    const SolveResult rotated = solve_full(q * b, rotated_nr, 1e-9);
    worst = std::max(worst, std::abs(rotated.value - base.value));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("property: equal projections and norms determine mu_bar") {
  Rng rng(777);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ti = testsupport::make_instance(8, 3, 13000 + trial);
    const MatrixXd& v = ti.basis.basis;
    const VectorXd b1 = rng.unit_vector(8);
    const VectorXd proj = v * (v.transpose() * b1).eval();
    const VectorXd resid1 = b1 - proj;
    if (resid1.norm() < 0.05) continue;
    VectorXd w = rng.gaussian_vector(8);
    w -= v * (v.transpose() * w).eval();
    if (w.norm() < 1e-6) continue;
    const VectorXd b2 = proj + w * (resid1.norm() / w.norm());
    const SolveResult r1 = solve_full(b1, ti.nr, 1e-9);
    const SolveResult r2 = solve_full(b2, ti.nr, 1e-9);
    CHECK(std::abs(r1.value - r2.value) <= 1e-6);
  }
}

TEST_CASE("property: positive homogeneity of the optimal value") {
  const auto ti = testsupport::make_instance(6, 2, 999);
  Rng rng(12);
  const VectorXd b = rng.unit_vector(6);
  const double base = solve_full(b, ti.nr, 1e-10).value;
  for (double alpha : {0.0, 0.3, 2.5}) {
    const double scaled = solve_full((alpha * b).eval(), ti.nr, 1e-10).value;
    CHECK(std::abs(scaled - alpha * base) <= 1e-9 * std::max(1.0, alpha));
  }
}

TEST_CASE("property: appending a half-space never increases the value") {
  Rng rng(13);
  for (int trial = 0; trial < 15; ++trial) {
    const auto ti = testsupport::make_instance(6, 3, 15000 + trial);
    const VectorXd b = rng.unit_vector(6);
    double previous = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= 3; ++m) {
      const auto nr = region_of(ti.nr.normals.leftCols(m), ti.nr.psi.head(m));
      const double value = solve_full(b, nr, 1e-9).value;
      CHECK(value <= previous + 1e-8);
      previous = value;
    }
  }
}

TEST_CASE("solvers validate their inputs") {
  const auto ti = testsupport::make_instance(4, 1, 2);
  CHECK_THROWS_AS(solve_full(VectorXd::Zero(3), ti.nr), std::invalid_argument);
  CHECK_THROWS_AS(solve_full(VectorXd::Zero(4), ti.nr, 0.0), std::invalid_argument);
  ProjectedFeature pf = scalar_feature(0.5, 0.5);
  MatrixXd a(1, 2);
  a << 1.0, 0.0;
  CHECK_THROWS_AS(solve_reduced(pf, a, VectorXd::Zero(1)), std::invalid_argument);
}

}  // TEST_SUITE
