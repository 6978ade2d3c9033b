#pragma once

#include "gpcert/box.hpp"
#include "gpcert/certificate.hpp"
#include "gpcert/gp.hpp"

#include <cstdint>

namespace gpcert {

/// Cartesian grid with `per_dim` evenly spaced values on every non-degenerate
/// side (the centre when per_dim == 1); frozen sides keep their value.
RowMatrix grid_points(const Box& region, int per_dim);

/// Per-draw suprema of the sampled difference process over a grid.
struct SupStatistics {
  /// max over grid of f_i(x_star) - f_i(x), one row per draw, one column per output.
  Matrix drop;
  /// max over grid of |f(x_star) - f(x)|_1, one entry per draw.
  Vector l1;
  std::uint64_t seed = 0;
  Index n_grid = 0;
  double jitter = 0.0;  // diagonal jitter the factorisation needed
};

struct SamplingOptions {
  int n_samples = 10000;
  std::uint64_t seed = 0;
};

namespace serial {
SupStatistics sample_sup_statistics(const TrainedGP& gp, const Vector& x_star, const RowMatrix& grid,
                                    const SamplingOptions& opts);
}
namespace omp {
/// Same draws as the serial version, bitwise; draws are batched by index.
SupStatistics sample_sup_statistics(const TrainedGP& gp, const Vector& x_star, const RowMatrix& grid,
                                    const SamplingOptions& opts);
}

struct EmpiricalEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  int n_samples = 0;
  Index n_grid = 0;
  std::uint64_t seed = 0;
};

/// Fraction of draws whose statistic exceeds delta.
EmpiricalEstimate empirical_phi(const SupStatistics& stats, double delta, CertificateMode mode, Index component = 0);

/// Sample and estimate in one call.
EmpiricalEstimate empirical_phi(const TrainedGP& gp, const Vector& x_star, const RowMatrix& grid, double delta,
                                const SamplingOptions& opts, CertificateMode mode, Index component = 0);

}  // namespace gpcert
