#pragma once

#include "gpcert/box.hpp"
#include "gpcert/gp.hpp"

#include <functional>

namespace gpcert {

struct BnBConfig {
  double tolerance = 1e-3;  // absolute gap target
  /// Variance searches stop on this gap relative to the incumbent instead;
  /// variances are often far below any sensible absolute tolerance.
  double variance_rel_tolerance = 0.05;
  long max_regions = 10000;
  int qp_max_iter = 5000;
  double qp_gap_tol = 1e-9;
  /// Called after every region evaluation with (regions evaluated, lower, upper).
  std::function<void(long, double, double)> on_progress;

  void validate() const;
};

/// Certified bounds on an extremum over a box. `witness` is the best point
/// found; its objective value lies in [lower, upper].
struct BoundResult {
  double lower = 0.0;
  double upper = 0.0;
  Vector witness;
  long iterations = 0;
  bool converged = false;
};

/// Bounds on inf over T of the posterior mean of output `component`.
BoundResult mean_inf_bounds(const TrainedGP& gp, const Box& region, Index component, const BnBConfig& cfg = {});
/// Bounds on sup over T of the posterior mean of output `component`.
BoundResult mean_sup_bounds(const TrainedGP& gp, const Box& region, Index component, const BnBConfig& cfg = {});

/// Upper bound on sup over T of mu(x_star) - mu(x) for one output.
double mu_o_sup(const TrainedGP& gp, const Vector& x_star, const Box& region, Index component,
                const BnBConfig& cfg = {});
/// Upper bound on sup over T of |mu(x_star) - mu(x)|_1 across outputs.
double mu_o_l1_sup(const TrainedGP& gp, const Vector& x_star, const Box& region, const BnBConfig& cfg = {});

/// Bounds on sup over T of Var[z(x_star) - z(x) | D]. Every output shares the
/// kernel, so the result is the same for all components.
BoundResult variance_sup_bounds(const TrainedGP& gp, const Vector& x_star, const Box& region,
                                const BnBConfig& cfg = {});
/// Bounds on sup over T of the posterior variance.
BoundResult variance_self_sup(const TrainedGP& gp, const Box& region, const BnBConfig& cfg = {});

/// K with d(x1, x2) <= K |x1 - x2| on T, from the prior bound
/// d^2 <= Sigma_11 + Sigma_22 - 2 Sigma_12. Infinite when no finite bound exists.
double lipschitz_bound(const KernelSpec& spec, const Box& region);

/// Bound on sup d over T x T from the supremum variance of the difference process.
double sup_d_bound(double xi_upper);

}  // namespace gpcert
