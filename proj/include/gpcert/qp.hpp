#pragma once

#include "gpcert/types.hpp"

#include <limits>

namespace gpcert {

struct BoxQPOptions {
  double gap_tol = 1e-9;
  int max_iter = 5000;
  /// Stop as soon as the certified lower bound reaches this value.
  double target = std::numeric_limits<double>::infinity();
  /// Give up once an iterate's value drops to this; the bound stays valid.
  double abandon = -std::numeric_limits<double>::infinity();
};

struct BoxQPResult {
  double lower_bound = 0.0;  // certified: <= min over the box
  double value = 0.0;        // objective at `solution`
  Vector solution;
  int iterations = 0;
  bool converged = false;
};

/// min (r - k)' Q (r - k) over lo <= r <= hi for symmetric PSD Q.
/// Accelerated projected gradient with restarts. The lower bound is the
/// linearisation bound f(r) + min_s grad f(r)'(s - r), valid at every iterate
/// by convexity, so stopping early never breaks soundness.
/// `q_norm` must be >= the largest eigenvalue of Q.
BoxQPResult box_qp_min(const Matrix& q, double q_norm, const Vector& k, const Vector& lo, const Vector& hi,
                       const BoxQPOptions& opts = {});

}  // namespace gpcert
