#pragma once

namespace gpcert {

/// 12 * integral over [0, sup_d/2] of sqrt(m ln(sqrt(m) K D / z + 1)) dz,
/// the expected-supremum bound from the covering number of an m-dimensional
/// box of side D under a K-Lipschitz pseudo-metric.
///
/// Integrated after z = a exp(-u) with adaptive Gauss-Kronrod (7/15) on a
/// finite u range plus a closed-form tail bound. The returned value is the
/// Kronrod sum plus its error estimate, so it errs on the high side.
double dudley_bound(double K, double D, int m_eff, double sup_d, double quad_tol = 1e-8);

}  // namespace gpcert
