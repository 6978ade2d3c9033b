#include "gpcert/nngp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gpcert {

Vector unit_normalize(const Vector& x) {
  const double n = x.norm();
  require(n > 0.0 && std::isfinite(n), "cannot normalise a zero vector");
  return x / n;
}

RowMatrix unit_normalize_rows(const RowMatrix& x) {
  RowMatrix out(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    const double n = x.row(i).norm();
    require(n > 0.0 && std::isfinite(n), "cannot normalise row " + std::to_string(i) + ": zero vector");
    out.row(i) = x.row(i) / n;
  }
  return out;
}

Matrix one_hot_targets(const std::vector<int>& labels, int n_classes, double on, double off) {
  require(n_classes >= 1, "need at least one class");
  Matrix y = Matrix::Constant(static_cast<Index>(labels.size()), n_classes, off);
  for (std::size_t r = 0; r < labels.size(); ++r) {
    require(labels[r] >= 0 && labels[r] < n_classes,
            "label " + std::to_string(labels[r]) + " out of range in row " + std::to_string(r));
    y(static_cast<Index>(r), labels[r]) = on;
  }
  return y;
}

ClassificationResult classify(const TrainedGP& gp, const Vector& x) {
  ClassificationResult res;
  res.scores = posterior_mean(gp, x);
  Index best = 0;
  for (Index c = 1; c < res.scores.size(); ++c) {
    if (res.scores[c] > res.scores[best]) best = c;
  }
  res.predicted = static_cast<int>(best);
  double runner = -std::numeric_limits<double>::infinity();
  for (Index c = 0; c < res.scores.size(); ++c) {
    if (c != best) runner = std::max(runner, res.scores[c]);
  }
  res.margin = std::isfinite(runner) ? res.scores[best] - runner : 0.0;
  return res;
}

void FeatureMask::validate(Index dim) const {
  require(!pixels.empty(), "feature mask '" + name + "' is empty");
  require(gamma >= 0.0 && std::isfinite(gamma), "feature mask '" + name + "' has a negative gamma");
  for (std::size_t k = 0; k < pixels.size(); ++k) {
    require(pixels[k] >= 0 && pixels[k] < dim, "feature mask '" + name + "' pixel out of range");
    if (k > 0) require(pixels[k] > pixels[k - 1], "feature mask '" + name + "' pixels must be sorted and unique");
  }
}

Box feature_box(const Vector& x_star, const FeatureMask& mask, std::optional<Interval> clip) {
  mask.validate(x_star.size());
  Vector lo = x_star;
  Vector hi = x_star;
  for (Index j : mask.pixels) {
    lo[j] = x_star[j] - mask.gamma;
    hi[j] = x_star[j] + mask.gamma;
    if (clip) {
      lo[j] = std::clamp(lo[j], clip->lo, clip->hi);
      hi[j] = std::clamp(hi[j], clip->lo, clip->hi);
      // keep x_star inside even if it sits outside the clip range
      lo[j] = std::min(lo[j], x_star[j]);
      hi[j] = std::max(hi[j], x_star[j]);
    }
  }
  return Box(lo, hi);
}

double normalized_variance_sup(const TrainedGP& gp, const Vector& x_star, const FeatureMask& mask,
                               const BnBConfig& cfg, std::optional<Interval> clip) {
  const double at_star = posterior_var(gp, x_star);
  if (!(at_star > 0.0)) throw NumericalError("posterior variance at x_star is zero; normalised variance undefined");
  const Box region = feature_box(x_star, mask, clip);
  if (region.is_point()) return 1.0;
  const BoundResult r = variance_self_sup(gp, region, cfg);
  return std::max(r.upper, at_star) / at_star;
}

std::vector<VarianceCell> depth_width_sweep(const DepthWidthSweep& sweep, const BnBConfig& cfg) {
  require(!sweep.sizes.empty() && !sweep.layers.empty() && sweep.points.rows() > 0,
          "depth/width sweep needs sizes, layer counts and test points");
  std::vector<VarianceCell> cells;
  for (int l : sweep.layers) {
    for (Index n : sweep.sizes) {
      std::string fit_error;
      std::optional<TrainedGP> gp;
      try {
        const auto spec = KernelSpec::relu_deep(l, sweep.sigma_w2, sweep.sigma_b2, sweep.train.input_dim());
        gp.emplace(TrainedGP::fit(spec, sweep.train.head(n), sweep.jitter));
      } catch (const std::exception& e) {
        fit_error = e.what();
      }
      for (Index p = 0; p < sweep.points.rows(); ++p) {
        VarianceCell cell{l, n, p, std::numeric_limits<double>::quiet_NaN(), fit_error};
        if (gp) {
          try {
            cell.sigma_bar_sq = normalized_variance_sup(*gp, sweep.points.row(p).transpose(), sweep.mask, cfg, sweep.clip);
          } catch (const std::exception& e) {
            cell.error = e.what();
          }
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

}  // namespace gpcert
