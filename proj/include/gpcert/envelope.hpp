#pragma once

#include "gpcert/kernels.hpp"

namespace gpcert {

/// Affine bounds a_lower + b_lower phi <= psi(phi) <= a_upper + b_upper phi on `interval`.
struct LinearEnvelope {
  double a_lower = 0.0;
  double b_lower = 0.0;
  double a_upper = 0.0;
  double b_upper = 0.0;
  Interval interval;

  [[nodiscard]] double lower(double phi) const { return a_lower + b_lower * phi; }
  [[nodiscard]] double upper(double phi) const { return a_upper + b_upper * phi; }
};

/// Tangent at the midpoint on convex pieces, chord on concave pieces, with
/// pieces between flex points folded left to right into a single line.
/// The upper line is the lower line of -psi, negated.
LinearEnvelope linear_envelope(const KernelSpec& spec, Interval phi);

}  // namespace gpcert
