#include "gpcert/datasets.hpp"

#include <random>

namespace gpcert {

Dataset make_saddle_dataset(const SaddleDatasetOptions& opts) {
  require(opts.samples >= 1, "dataset needs at least one sample");
  require(opts.noise >= 0.0, "noise level must be non-negative");
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;

  Eigen::Matrix2d a;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) a(i, j) = normal(rng);
  }
  const Eigen::Matrix2d cov = a * a.transpose() + 0.5 * Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d chol = cov.llt().matrixL();

  Dataset d;
  d.inputs.resize(opts.samples, 2);
  d.targets.resize(opts.samples, 1);
  for (int s = 0; s < opts.samples; ++s) {
    const double z0 = normal(rng);
    const double z1 = normal(rng);
    const Eigen::Vector2d z(z0, z1);
    const Eigen::Vector2d x = chol * z;
    d.inputs.row(s) = x.transpose();
    d.targets(s, 0) = opts.scale * x[0] * x[1] + opts.noise * normal(rng);
  }
  return d;
}

}  // namespace gpcert
