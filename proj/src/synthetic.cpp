#include "lassoscreen/synthetic.hpp"

#include <stdexcept>
#include <vector>

#include "lassoscreen/rng.hpp"

namespace lassoscreen {

SyntheticData make_synthetic(int n, int p, std::uint64_t seed, const SyntheticOptions& opts) {
  if (n < 2 || p < 2) throw std::invalid_argument("make_synthetic: need n, p >= 2");
  if (opts.support < 1 || opts.support > p)
    throw std::invalid_argument("make_synthetic: support out of range");

  Rng rng(seed);
  SyntheticData data;
  data.dictionary.resize(n, p);
  for (int i = 0; i < p; ++i) data.dictionary.col(i) = rng.unit_vector(n);

  // Distinct generating columns with geometrically decaying weights; the
  // dominant one keeps lambda_max close to ||x||, which is what makes the
  // default dual region informative.
  std::vector<int> chosen;
  while (static_cast<int>(chosen.size()) < opts.support) {
    const int candidate = static_cast<int>(rng.integer(static_cast<std::uint64_t>(p)));
    bool seen = false;
    for (int c : chosen) seen = seen || c == candidate;
    if (!seen) chosen.push_back(candidate);
  }

  // Blend the secondary generator atoms toward the leading one.
  for (int j = 1; j < opts.support; ++j) {
    const double rho = rng.uniform(opts.correlation_min, opts.correlation_max);
    Eigen::VectorXd blended = rho * data.dictionary.col(chosen[0]) +
                              std::sqrt(std::max(0.0, 1.0 - rho * rho)) *
                                  data.dictionary.col(chosen[j]);
    data.dictionary.col(chosen[j]) = blended / blended.norm();
  }

  // One shared sign: the secondary atoms are positively correlated with the
  // leading one, so matching signs keeps the synthesized mass concentrated
  // along a single dominant direction.
  data.true_coefficients = Eigen::VectorXd::Zero(p);
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  double magnitude = 1.0;
  for (int j = 0; j < opts.support; ++j) {
    data.true_coefficients[chosen[j]] = sign * magnitude;
    magnitude *= opts.decay;
  }

  const Eigen::VectorXd clean = data.dictionary * data.true_coefficients;
  Eigen::VectorXd noise = rng.gaussian_vector(n);
  const double noise_norm = noise.norm();
  if (noise_norm > 0.0)
    noise *= opts.noise_fraction * clean.norm() / noise_norm;
  data.target = clean + noise;
  return data;
}

}  // namespace lassoscreen
