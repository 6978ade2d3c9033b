#pragma once

#include "gpcert/bounds.hpp"
#include "gpcert/gp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gpcert {

Vector unit_normalize(const Vector& x);
/// Normalises every row.
RowMatrix unit_normalize_rows(const RowMatrix& x);

/// One row per label; `on`/`off` set the coding (0/1 by default).
Matrix one_hot_targets(const std::vector<int>& labels, int n_classes, double on = 1.0, double off = 0.0);

struct ClassificationResult {
  int predicted = 0;
  Vector scores;       // posterior mean per class
  double margin = 0.0; // top score minus runner-up
};

/// Argmax of the posterior mean, lowest class on ties.
ClassificationResult classify(const TrainedGP& gp, const Vector& x);

struct FeatureMask {
  std::string name;
  std::vector<Index> pixels;  // sorted, unique
  double gamma = 0.0;

  void validate(Index dim) const;
};

/// [x_j - gamma, x_j + gamma] on masked coordinates, optionally clipped, frozen elsewhere.
Box feature_box(const Vector& x_star, const FeatureMask& mask, std::optional<Interval> clip = std::nullopt);

/// sup over the feature box of the posterior variance divided by the variance at x_star.
double normalized_variance_sup(const TrainedGP& gp, const Vector& x_star, const FeatureMask& mask,
                               const BnBConfig& cfg = {}, std::optional<Interval> clip = std::nullopt);

struct VarianceCell {
  int layers;
  Index n_train;
  Index point_id;
  double sigma_bar_sq;  // NaN when the cell failed
  std::string error;
};

struct DepthWidthSweep {
  Dataset train;   // rows already unit-normalised
  RowMatrix points;  // test points, unit-normalised
  std::vector<Index> sizes;
  std::vector<int> layers;
  double sigma_w2 = 3.19;
  double sigma_b2 = 0.0;
  double jitter = 1e-6;
  FeatureMask mask;
  std::optional<Interval> clip;
};

/// One cell per (layers, size, point), ordered layers-major. Each (layers, size)
/// pair fits one GP on the first `size` training rows.
std::vector<VarianceCell> depth_width_sweep(const DepthWidthSweep& sweep, const BnBConfig& cfg = {});

}  // namespace gpcert
