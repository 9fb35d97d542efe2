#include "lassoscreen/projection.hpp"

#include <cmath>
#include <stdexcept>

namespace lassoscreen {

namespace {
constexpr double kPairTol = 1e-10;
constexpr double kResidualFloor = 1e-10;
}  // namespace

ProjectionBasis orthonormal_basis(const Eigen::MatrixXd& normals, double tol) {
  if (normals.cols() == 0)
    throw std::invalid_argument("orthonormal_basis: no normals (m = 0 is handled upstream)");
  const Eigen::Index n = normals.rows();
  const Eigen::Index m = normals.cols();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(normals);
  const Eigen::MatrixXd r_top =
      qr.matrixR().topLeftCorner(std::min(n, m), m).template triangularView<Eigen::Upper>();
  const double pivot0 = std::abs(r_top(0, 0));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < std::min(n, m); ++i) {
    if (std::abs(r_top(i, i)) > tol * pivot0) ++rank;
  }
  if (rank == 0) throw std::invalid_argument("orthonormal_basis: normals numerically zero");

  ProjectionBasis basis;
  basis.rank = rank;
  basis.basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, rank);
  basis.normals_in_basis = normals.transpose() * basis.basis;
  return basis;
}

ProjectedFeature project(const Eigen::VectorXd& b, const ProjectionBasis& basis) {
  if (b.size() != basis.basis.rows())
    throw std::invalid_argument("project: dimension mismatch");
  ProjectedFeature pf;
  pf.coords = basis.basis.transpose() * b;
  pf.residual_norm = (b - basis.basis * pf.coords).norm();
  pf.original_norm = b.norm();
  return pf;
}

Eigen::MatrixXd make_symmetry_rotation(const Eigen::VectorXd& z1, const Eigen::VectorXd& z2,
                                       const ProjectionBasis& basis, bool* identity_fallback) {
  const Eigen::Index n = basis.basis.rows();
  if (z1.size() != n || z2.size() != n)
    throw std::invalid_argument("make_symmetry_rotation: dimension mismatch");
  if (std::abs(z1.norm() - z2.norm()) > kPairTol)
    throw std::invalid_argument("make_symmetry_rotation: norms differ");

  const Eigen::MatrixXd& v = basis.basis;
  const Eigen::VectorXd t1 = v.transpose() * z1;
  const Eigen::VectorXd t2 = v.transpose() * z2;
  if ((t1 - t2).norm() > kPairTol)
    throw std::invalid_argument("make_symmetry_rotation: projections onto span(V) differ");

  const Eigen::VectorXd r1 = z1 - v * t1;
  const Eigen::VectorXd r2 = z2 - v * t2;
  if (identity_fallback) *identity_fallback = false;
  if (r1.norm() < kResidualFloor || r2.norm() < kResidualFloor) {
    // Both points lie in span(V) (equal norms and projections force both
    // residuals small together), so the identity already maps z2 to z1.
    if (identity_fallback) *identity_fallback = true;
    return Eigen::MatrixXd::Identity(n, n);
  }

  const Eigen::Index d = basis.rank;
  auto complete = [&](const Eigen::VectorXd& unit_residual) {
    Eigen::MatrixXd block(n, d + 1);
    block.leftCols(d) = v;
    block.col(d) = unit_residual;
    Eigen::MatrixXd full(n, n);
    full.leftCols(d + 1) = block;
    // Remaining columns of the full Householder Q are an orthonormal
    // completion of span(block); the first d+1 are replaced by block itself
    // so R acts exactly as required on span(V) and the residual line.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(block);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    full.rightCols(n - d - 1) = q.rightCols(n - d - 1);
    return full;
  };

  const Eigen::MatrixXd u_full = complete(r1 / r1.norm());
  const Eigen::MatrixXd w_full = complete(r2 / r2.norm());
  return u_full * w_full.transpose();
}

}  // namespace lassoscreen
