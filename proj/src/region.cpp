#include "lassoscreen/region.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lassoscreen/rng.hpp"

namespace lassoscreen {

namespace {
constexpr double kUnitNormTol = 1e-12;
}

void validate_region(const Region& region) {
  const Eigen::Index n = region.dim();
  const Eigen::Index m = region.num_halfspaces();
  if (n == 0) throw std::invalid_argument("region: empty center");
  if (region.radius < 0.0) throw std::invalid_argument("region: radius must be nonnegative");
  if (region.normals.rows() != n && m > 0)
    throw std::invalid_argument("region: normal dimension does not match center");
  if (region.offsets.size() != m)
    throw std::invalid_argument("region: offsets.size() != normals.cols()");
  for (Eigen::Index k = 0; k < m; ++k) {
    if (std::abs(region.normals.col(k).norm() - 1.0) > kUnitNormTol)
      throw std::invalid_argument("region: normal " + std::to_string(k) + " is not unit length");
  }
}

NormalizedRegion make_normalized_region(Eigen::MatrixXd normals, Eigen::VectorXd psi) {
  if (normals.cols() != psi.size())
    throw std::invalid_argument("normalized region: psi.size() != normals.cols()");
  NormalizedRegion nr;
  nr.normals = std::move(normals);
  nr.psi = std::move(psi);
  const Eigen::Index m = nr.psi.size();
  nr.dome_empty.resize(m);
  nr.dome_vacuous.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    // Round-off guard at the pin boundary: psi within 1e-12 above 1 still
    // denotes the single-point dome (solvers treat it the same way).
    nr.dome_empty[k] = nr.psi[k] > 1.0 + 1e-12;
    nr.dome_vacuous[k] = nr.psi[k] <= -1.0;
    nr.any_empty_dome = nr.any_empty_dome || nr.dome_empty[k];
  }
  return nr;
}

NormalizedRegion normalize(const Region& region) {
  validate_region(region);
  if (region.radius <= 0.0)
    throw std::invalid_argument("normalize: radius must be positive");
  const Eigen::Index m = region.num_halfspaces();
  Eigen::VectorXd psi(m);
  for (Eigen::Index k = 0; k < m; ++k)
    psi[k] = (region.normals.col(k).dot(region.center) - region.offsets[k]) / region.radius;
  return make_normalized_region(region.normals, std::move(psi));
}

double denormalize_value(double mu_bar, const Eigen::VectorXd& b, const Region& region) {
  return region.center.dot(b) + region.radius * mu_bar;
}

Region random_region(int n, int m, std::uint64_t seed, bool feasible) {
  if (n < 2 || m < 1 || m >= n)
    throw std::invalid_argument("random_region: need 1 <= m < n");
  Rng rng(seed);

  Region region;
  region.center = rng.gaussian_vector(n);
  region.radius = rng.uniform(0.5, 2.5);
  region.normals.resize(n, m);
  region.offsets.resize(m);
  for (int k = 0; k < m; ++k) region.normals.col(k) = rng.unit_vector(n);

  if (feasible) {
    // Interior point first: theta0 strictly inside the sphere, then offsets
    // with strictly positive slack at theta0.
    Eigen::VectorXd z0 = rng.unit_vector(n) * rng.uniform(0.0, 0.9);
    const Eigen::VectorXd theta0 = region.center + region.radius * z0;
    for (int k = 0; k < m; ++k) {
      const double slack = rng.uniform(0.01, 0.6) * region.radius;
      region.offsets[k] = region.normals.col(k).dot(theta0) + slack;
    }
  } else {
    for (int k = 0; k < m; ++k) {
      const double psi_target = rng.uniform(-1.3, 1.3);
      region.offsets[k] =
          region.normals.col(k).dot(region.center) - region.radius * psi_target;
    }
  }
  return region;
}

}  // namespace lassoscreen
