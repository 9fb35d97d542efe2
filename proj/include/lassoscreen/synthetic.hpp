#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace lassoscreen {

/// Sparse-coding style synthetic data: Gaussian dictionary with unit columns
/// and a target synthesized from a few columns plus noise. The leading
/// coefficient dominates so the default dual region is informative at
/// moderate lambda/lambda_max ratios, and the remaining generator atoms are
/// correlated with the leading one (as in natural dictionaries), which is
/// what gives additional half-spaces real cutting power.
struct SyntheticOptions {
  int support = 5;               // number of generating columns
  double decay = 0.75;           // coefficient j has magnitude decay^j
  double noise_fraction = 0.25;  // noise norm relative to the clean signal
  double correlation_min = 0.4;  // support atoms j >= 1 carry a component of
  double correlation_max = 0.75; // atom 0 with weight in this range
};

struct SyntheticData {
  Eigen::MatrixXd dictionary;         // n x p, unit columns
  Eigen::VectorXd target;             // length n
  Eigen::VectorXd true_coefficients;  // length p, the synthesis weights
};

SyntheticData make_synthetic(int n, int p, std::uint64_t seed, const SyntheticOptions& opts = {});

}  // namespace lassoscreen
