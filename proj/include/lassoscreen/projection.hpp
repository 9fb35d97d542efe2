#pragma once

#include <Eigen/Dense>

namespace lassoscreen {

/// Orthonormal basis V for the span of the half-space normals, together with
/// the normals expressed in that basis. rank < m when normals are linearly
/// dependent (duplicate or greedily re-selected directions).
struct ProjectionBasis {
  Eigen::MatrixXd basis;             // V, n x d with V^T V = I
  Eigen::MatrixXd normals_in_basis;  // A = N^T V, m x d; row k is n_k in V coordinates
  Eigen::Index rank = 0;             // d
};

/// A feature split into its component inside span{n_k} and the norm of the
/// orthogonal remainder. coords.squaredNorm() + residual_norm^2 equals
/// original_norm^2.
struct ProjectedFeature {
  Eigen::VectorXd coords;      // t = V^T b
  double residual_norm = 0.0;  // ||b - V t||
  double original_norm = 0.0;  // ||b||
};

/// Column-pivoted QR factorization of the normal matrix. The numerical rank
/// is the number of diagonal entries of R above tol relative to the largest.
/// Throws std::invalid_argument when `normals` has no columns.
ProjectionBasis orthonormal_basis(const Eigen::MatrixXd& normals, double tol = 1e-10);

ProjectedFeature project(const Eigen::VectorXd& b, const ProjectionBasis& basis);

/// Orthogonal R fixing every vector in span(V) and mapping z2 to z1, built by
/// extending V with the normalized residuals of z1 and z2 plus arbitrary
/// orthonormal completions. Requires ||z1|| == ||z2|| and V^T z1 == V^T z2
/// within 1e-10 (throws std::invalid_argument otherwise). When both residuals
/// are below 1e-10 the points coincide with their projections and the
/// identity is returned; identity_fallback (if non-null) reports this.
Eigen::MatrixXd make_symmetry_rotation(const Eigen::VectorXd& z1, const Eigen::VectorXd& z2,
                                       const ProjectionBasis& basis,
                                       bool* identity_fallback = nullptr);

}  // namespace lassoscreen
