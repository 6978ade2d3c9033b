#include "gpcert/qp.hpp"

#include <cmath>

namespace gpcert {

namespace {

// Linearisation lower bound at r given the gradient there.
double linear_bound(double f, const Vector& grad, const Vector& r, const Vector& lo, const Vector& hi) {
  double acc = f;
  for (Index j = 0; j < r.size(); ++j) acc += std::min(grad[j] * (lo[j] - r[j]), grad[j] * (hi[j] - r[j]));
  return acc;
}

}  // namespace

BoxQPResult box_qp_min(const Matrix& q, double q_norm, const Vector& k, const Vector& lo, const Vector& hi,
                       const BoxQPOptions& opts) {
  const Index n = k.size();
  require(q.rows() == n && q.cols() == n && lo.size() == n && hi.size() == n, "box QP: dimension mismatch");
  BoxQPResult res;
  res.solution = k.cwiseMax(lo).cwiseMin(hi);
  if (n == 0) {
    res.converged = true;
    return res;
  }
  const double step = q_norm > 0.0 ? 1.0 / (2.0 * q_norm) : 0.0;

  Vector x = res.solution;
  Vector qd = q * (x - k);
  double fx = (x - k).dot(qd);
  Vector grad = 2.0 * qd;
  res.lower_bound = std::max(0.0, linear_bound(fx, grad, x, lo, hi));
  res.value = fx;
  if (fx - res.lower_bound <= opts.gap_tol || res.lower_bound >= opts.target || fx <= opts.abandon || step == 0.0) {
    res.converged = fx - res.lower_bound <= opts.gap_tol;
    return res;
  }

  Vector y = x;
  double t = 1.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    res.iterations = it;
    const Vector gy = 2.0 * (q * (y - k));
    Vector x_next = (y - step * gy).cwiseMax(lo).cwiseMin(hi);
    qd.noalias() = q * (x_next - k);
    const double f_next = (x_next - k).dot(qd);
    if (f_next > fx && t > 1.0) {
      // objective went up: restart momentum from the last iterate
      y = x;
      t = 1.0;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_next + ((t - 1.0) / t_next) * (x_next - x);
    x.swap(x_next);
    fx = f_next;
    t = t_next;
    grad = 2.0 * qd;
    const double lb = std::max(0.0, linear_bound(fx, grad, x, lo, hi));
    res.lower_bound = std::max(res.lower_bound, lb);
    if (fx < res.value) {
      res.value = fx;
      res.solution = x;
    }
    if (res.value - res.lower_bound <= opts.gap_tol) {
      res.converged = true;
      break;
    }
    if (res.lower_bound >= opts.target || res.value <= opts.abandon) break;
  }
  return res;
}

}  // namespace gpcert
