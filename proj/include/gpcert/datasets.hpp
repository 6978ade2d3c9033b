#pragma once

#include "gpcert/gp.hpp"

#include <cstdint>

namespace gpcert {

/// Synthetic 2-D regression set: inputs drawn from a zero-mean Gaussian with
/// a random covariance, targets scale * x0 * x1 (a saddle at the origin)
/// plus Gaussian noise.
struct SaddleDatasetOptions {
  int samples = 128;
  double scale = 0.01;
  double noise = 0.001;
  std::uint64_t seed = 2019;
};

Dataset make_saddle_dataset(const SaddleDatasetOptions& opts = {});

}  // namespace gpcert
