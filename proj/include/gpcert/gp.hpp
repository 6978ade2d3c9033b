#pragma once

#include "gpcert/kernels.hpp"

#include <string>
#include <utility>
#include <vector>

namespace gpcert {

/// Training set: one input per row of `inputs`, one target vector per row of `targets`.
struct Dataset {
  RowMatrix inputs;  // N x m
  Matrix targets;    // N x n

  [[nodiscard]] Index size() const { return inputs.rows(); }
  [[nodiscard]] Index input_dim() const { return inputs.cols(); }
  [[nodiscard]] Index output_dim() const { return targets.cols(); }
  void validate() const;
  /// First `count` rows.
  [[nodiscard]] Dataset head(Index count) const;
};

/// Immutable posterior state. Outputs are independent GPs sharing one kernel,
/// so a single factorisation serves every component.
class TrainedGP {
 public:
  static TrainedGP fit(const KernelSpec& spec, Dataset data, double jitter = 1e-6, Vector prior_mean = {});
  /// No conditioning data: every query returns the prior.
  static TrainedGP prior_only(const KernelSpec& spec, Index n_outputs, Vector prior_mean = {});
  /// Rebuilds a fitted GP from stored factors without refactorising.
  static TrainedGP restore(const KernelSpec& spec, Dataset data, double jitter, Vector prior_mean, Matrix cholesky,
                           Matrix weights, Matrix gram_inverse, double gram_inverse_norm);

  [[nodiscard]] const KernelSpec& spec() const { return spec_; }
  [[nodiscard]] const Dataset& data() const { return data_; }
  [[nodiscard]] double jitter() const { return jitter_; }
  [[nodiscard]] const Vector& prior_mean() const { return prior_mean_; }
  /// Lower factor of Sigma_DD + jitter I.
  [[nodiscard]] const Matrix& cholesky() const { return chol_; }
  /// t = (Sigma_DD + jitter I)^-1 (y - mu_D), one column per output.
  [[nodiscard]] const Matrix& weights() const { return weights_; }
  /// (Sigma_DD + jitter I)^-1.
  [[nodiscard]] const Matrix& gram_inverse() const { return gram_inverse_; }
  /// Largest eigenvalue of gram_inverse().
  [[nodiscard]] double gram_inverse_norm() const { return gram_inverse_norm_; }

  [[nodiscard]] Index size() const { return data_.size(); }
  [[nodiscard]] Index input_dim() const { return spec_.dim(); }
  [[nodiscard]] Index output_dim() const { return prior_mean_.size(); }

  /// Sigma_{x, D}.
  [[nodiscard]] Vector kernel_row(ConstVectorRef x) const;
  /// L^-1 Sigma_{D, x}.
  [[nodiscard]] Vector whitened_row(ConstVectorRef x) const;

 private:
  TrainedGP(KernelSpec spec) : spec_(std::move(spec)) {}

  KernelSpec spec_;
  Dataset data_;
  double jitter_ = 0.0;
  Vector prior_mean_;
  Matrix chol_;
  Matrix weights_;
  Matrix gram_inverse_;
  double gram_inverse_norm_ = 0.0;
};

Vector posterior_mean(const TrainedGP& gp, ConstVectorRef x);
double posterior_mean(const TrainedGP& gp, ConstVectorRef x, Index component);
double posterior_cov(const TrainedGP& gp, ConstVectorRef x1, ConstVectorRef x2);
/// posterior_cov(x, x) clamped at zero.
double posterior_var(const TrainedGP& gp, ConstVectorRef x);
/// Number of negative posterior variances clamped so far (process wide).
long clamped_variance_count();

/// Moments of z(x_star) - z(x) under the posterior.
struct DiffMoments {
  Vector mean;
  Matrix cov;
};
DiffMoments difference_moments(const TrainedGP& gp, ConstVectorRef x_star, ConstVectorRef x);

/// Gaussian log evidence summed over output components.
double log_marginal_likelihood(const TrainedGP& gp);

/// Ordered hyperparameter axes. Names are KernelSpec::with_param names plus
/// "noise", which sets the jitter.
using HyperGrid = std::vector<std::pair<std::string, std::vector<double>>>;

struct GridSearchResult {
  KernelSpec spec;
  double jitter;
  double log_likelihood;
  int evaluated;
  int failed;
};

/// Exhaustive search of the Cartesian grid, first axis outermost. Ties keep
/// the earliest grid point.
GridSearchResult hyper_grid_search(const KernelSpec& spec_template, const Dataset& data, const HyperGrid& grid,
                                   double jitter = 1e-6, Vector prior_mean = {});

}  // namespace gpcert
