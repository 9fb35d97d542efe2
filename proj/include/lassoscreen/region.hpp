#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace lassoscreen {

/// Compact bound on the lasso dual point: the sphere ||theta - q|| <= r
/// intersected with half-spaces n_k . theta <= c_k (unit normals).
///
/// radius == 0 represents the degenerate single-point sphere that arises at
/// lambda == lambda_max; normalize() requires radius > 0.
struct Region {
  Eigen::VectorXd center;   // q
  double radius = 0.0;      // r
  Eigen::MatrixXd normals;  // n x m, one unit normal per column
  Eigen::VectorXd offsets;  // c, one per half-space

  Eigen::Index dim() const { return center.size(); }
  Eigen::Index num_halfspaces() const { return normals.cols(); }
};

/// Throws std::invalid_argument on shape mismatch, negative radius, or a
/// normal that is not unit length within 1e-12.
void validate_region(const Region& region);

/// Unit-ball form of a Region under z = (theta - q)/r. The feasible set is
/// the intersection of the domes D_k = {z : ||z|| <= 1, n_k . z + psi_k <= 0}.
/// Dome k is empty iff psi_k > 1 (flagged with a 1e-12 round-off guard, since
/// psi_k == 1 is the valid single-point dome) and vacuous (contains the whole
/// ball, skippable by solvers) iff psi_k <= -1.
struct NormalizedRegion {
  Eigen::MatrixXd normals;         // N, n x m unit columns
  Eigen::VectorXd psi;             // psi_k = (n_k . q - c_k)/r
  std::vector<bool> dome_empty;    // psi_k > 1
  std::vector<bool> dome_vacuous;  // psi_k <= -1
  bool any_empty_dome = false;

  Eigen::Index dim() const { return normals.rows(); }
  Eigen::Index num_halfspaces() const { return normals.cols(); }
};

/// Builds a NormalizedRegion from an already-normalized constraint system
/// (unit columns in `normals`), filling the per-dome flags.
NormalizedRegion make_normalized_region(Eigen::MatrixXd normals, Eigen::VectorXd psi);

/// Change of variables z = (theta - q)/r. Requires radius > 0; any psi value
/// is representable (emptiness is flagged, not an error).
NormalizedRegion normalize(const Region& region);

/// Maps the normalized optimum back: mu(b) = q . b + r * mu_bar.
double denormalize_value(double mu_bar, const Eigen::VectorXd& b, const Region& region);

/// Deterministic random test region with 1 <= m < n half-spaces. With
/// feasible=true the offsets are chosen around a constructed interior point,
/// so the feasible set is certified to have nonempty interior.
Region random_region(int n, int m, std::uint64_t seed, bool feasible);

}  // namespace lassoscreen
