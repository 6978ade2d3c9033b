#pragma once

#include "gpcert/box.hpp"
#include "gpcert/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace gpcert {

enum class KernelFamily {
  SquaredExponential,
  ReluDeep,
  RationalQuadratic,
  Linear,
  Periodic,
  MaternHalfInteger,
};

std::string_view family_name(KernelFamily family);
KernelFamily family_from_name(std::string_view name);

using ConstVectorRef = Eigen::Ref<const Vector>;

/// Kernel family plus hyperparameters. Every kernel is written as
/// Sigma(x1, x2) = psi(phi(x1, x2)) where phi carries the two-point
/// dependence and psi is a smooth scalar map.
///
/// relu-deep kernels see their inputs through x / |x|, so the Gram
/// entries of unit-norm data are the plain NNGP recursion and any other
/// point is projected onto the sphere first.
class KernelSpec {
 public:
  static KernelSpec squared_exponential(double sigma2, Vector theta);
  static KernelSpec relu_deep(int layers, double sigma_w2, double sigma_b2, Index dim);
  static KernelSpec rational_quadratic(double sigma2, double alpha, Vector theta);
  static KernelSpec linear(double sigma2, Vector offsets);
  static KernelSpec periodic(double sigma2, Vector theta, Vector freq);
  static KernelSpec matern(double sigma2, Vector theta, int p);

  [[nodiscard]] KernelFamily family() const { return family_; }
  [[nodiscard]] Index dim() const { return dim_; }
  [[nodiscard]] double sigma2() const { return sigma2_; }
  /// Inverse squared lengthscales (SE, RQ, periodic, Matern) or offsets (linear).
  [[nodiscard]] const Vector& theta() const { return theta_; }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] const Vector& freq() const { return freq_; }
  [[nodiscard]] int matern_p() const { return matern_p_; }
  [[nodiscard]] int layers() const { return layers_; }
  [[nodiscard]] double sigma_w2() const { return sigma_w2_; }
  [[nodiscard]] double sigma_b2() const { return sigma_b2_; }

  /// ReLU phi = k1 + k2 (x1 . x2) on unit-norm inputs.
  [[nodiscard]] double relu_k1() const;
  [[nodiscard]] double relu_k2() const;
  /// Sigma^l(x, x) for unit-norm x, l = 0..layers.
  [[nodiscard]] double relu_diag(int layer) const { return relu_diag_.at(static_cast<std::size_t>(layer)); }

  /// Matern phi scaling (2p + 1) so that sqrt(phi) = sqrt(2 nu) r / lengthscale.
  [[nodiscard]] double matern_scale() const { return 2.0 * matern_p_ + 1.0; }
  /// Matern polynomial P(s) = sum_l k_{l,p} s^(p-l), ascending powers.
  [[nodiscard]] const std::vector<double>& matern_poly() const { return matern_poly_; }

  [[nodiscard]] bool stationary() const;
  /// True when psi decreases in phi (all stationary families).
  [[nodiscard]] bool psi_decreasing() const { return stationary(); }
  [[nodiscard]] Interval psi_domain() const;

  /// Inflection points of psi over its whole domain, computed once at construction.
  [[nodiscard]] const std::vector<double>& domain_flex_points() const { return flex_points_; }

  /// Copy with every hyperparameter named `name` replaced (used by grid search).
  /// Names: sigma2, theta (all dims), theta<j>, alpha, p, layers, sigma_w2, sigma_b2, freq (all dims), freq<j>.
  [[nodiscard]] KernelSpec with_param(const std::string& name, double value) const;

 private:
  KernelSpec() = default;
  void finalize();

  KernelFamily family_ = KernelFamily::SquaredExponential;
  Index dim_ = 0;
  double sigma2_ = 1.0;
  Vector theta_;
  double alpha_ = 1.0;
  Vector freq_;
  int matern_p_ = 0;
  int layers_ = 1;
  double sigma_w2_ = 1.0;
  double sigma_b2_ = 0.0;

  std::vector<double> relu_diag_;
  std::vector<double> matern_poly_;  // P(s) coefficients, ascending powers
  std::vector<double> flex_points_;
};

double kernel_eval(const KernelSpec& spec, ConstVectorRef x1, ConstVectorRef x2);
double phi_eval(const KernelSpec& spec, ConstVectorRef x1, ConstVectorRef x2);
double psi_eval(const KernelSpec& spec, double phi);
double psi_derivative(const KernelSpec& spec, double phi);
double psi_second_derivative(const KernelSpec& spec, double phi);

/// Sorted inflection points of psi strictly inside `interval`.
std::vector<double> psi_flex_points(const KernelSpec& spec, Interval interval);

/// Sign scan of psi'' on `samples` points refined by bisection. Shared by
/// the ReLU family and the tests that cross-check the analytic answers.
std::vector<double> scan_flex_points(const KernelSpec& spec, Interval interval, int samples = 1024);

/// Enclosure of {phi(x, anchor) : x in T}.
Interval phi_range(const KernelSpec& spec, const Box& region, ConstVectorRef anchor);
/// phi_range for each row of `anchors`.
std::vector<Interval> phi_ranges(const KernelSpec& spec, const Box& region, const RowMatrix& anchors);

/// [min psi, max psi] over a phi interval. Every supported psi is monotone,
/// so the extremes sit at the interval ends.
Interval psi_range(const KernelSpec& spec, Interval phi);

/// Enclosure of Sigma(x, x) over the region.
Interval self_covariance_range(const KernelSpec& spec, const Box& region);

struct WeightedSup {
  double value = 0.0;   // sup over T of sum_i c_i phi(x, x_i), or an upper bound when !exact
  Vector maximizer;     // point of T; attains `value` when exact
  bool exact = true;
};

/// sup over T of sum_i coeffs_i * phi(x, anchors_i).
WeightedSup weighted_phi_sup(const KernelSpec& spec, const Box& region, const Vector& coeffs,
                             const RowMatrix& anchors);

}  // namespace gpcert
