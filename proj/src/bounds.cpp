#include "gpcert/bounds.hpp"

#include "gpcert/envelope.hpp"
#include "gpcert/qp.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace gpcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RegionEval {
  double lower;
  double upper;
  Vector witness;
};

// Region evaluator for a minimisation problem; the second argument is the
// current incumbent so evaluators can stop once a region is provably pruned.
using Evaluator = std::function<RegionEval(const Box&, double)>;

struct Node {
  Box box;
  double lower;
  long index;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.lower != b.lower) return a.lower > b.lower;
    return a.index > b.index;
  }
};

// Best-first branch and bound for inf over `region`.
// With `relative` the stopping gap is cfg.variance_rel_tolerance * |incumbent|.
BoundResult minimize(const Box& region, const Evaluator& eval, const BnBConfig& cfg, bool relative = false) {
  cfg.validate();
  auto done = [&](double best, double lower) {
    if (relative) return best - lower <= std::max(cfg.variance_rel_tolerance * std::abs(best), 1e-300);
    return best - lower <= cfg.tolerance;
  };
  BoundResult res;
  RegionEval root = eval(region, kInf);
  res.iterations = 1;
  double best = root.upper;
  res.witness = root.witness;
  double pruned = kInf;
  double pending = kInf;  // lower bound of children not yet evaluated

  std::priority_queue<Node, std::vector<Node>, NodeOrder> heap;
  long next_index = 0;
  heap.push({region, root.lower, next_index++});

  auto global_lower = [&] {
    double lo = std::min({best, pruned, pending});
    if (!heap.empty()) lo = std::min(lo, heap.top().lower);
    return lo;
  };
  if (cfg.on_progress) cfg.on_progress(res.iterations, global_lower(), best);

  res.converged = true;
  while (!heap.empty()) {
    const Node& top = heap.top();
    if (done(best, top.lower)) break;
    if (top.box.is_point()) {
      // exact value: nothing left to refine here
      pruned = std::min(pruned, top.lower);
      heap.pop();
      continue;
    }
    if (res.iterations >= cfg.max_regions) {
      res.converged = false;
      break;
    }
    Node node = top;
    heap.pop();
    auto [left, right] = node.box.split();
    for (Box* child : {&left, &right}) {
      pending = child == &left ? node.lower : kInf;
      RegionEval e = eval(*child, best);
      ++res.iterations;
      // children inherit the parent's bound so the global bound never drops
      e.lower = std::max(e.lower, node.lower);
      if (e.upper < best) {
        best = e.upper;
        res.witness = e.witness;
      }
      if (e.lower > best) pruned = std::min(pruned, e.lower);
      else heap.push({std::move(*child), e.lower, next_index++});
      if (cfg.on_progress) cfg.on_progress(res.iterations, global_lower(), best);
    }
    pending = kInf;
  }
  res.lower = std::min(global_lower(), best);
  res.upper = best;
  return res;
}

BoundResult negate(BoundResult r) {
  const double lo = -r.upper;
  r.upper = -r.lower;
  r.lower = lo;
  return r;
}

// inf over the region of sign * mu_component(x).
BoundResult signed_mean_inf(const TrainedGP& gp, const Box& region, Index component, double sign,
                            const BnBConfig& cfg) {
  require(component >= 0 && component < gp.output_dim(), "output component out of range");
  require(region.dim() == gp.input_dim(), "box dimension differs from the GP input dimension");
  const KernelSpec& spec = gp.spec();
  const RowMatrix& xs = gp.data().inputs;
  const Index n = gp.size();
  auto value = [&](const Vector& x) { return sign * posterior_mean(gp, x, component); };

  Evaluator eval = [&](const Box& r, double) -> RegionEval {
    if (r.is_point()) {
      const double v = value(r.lower());
      return {v, v, r.lower()};
    }
    const auto ranges = phi_ranges(spec, r, xs);
    double base = sign * gp.prior_mean()[component];
    double magnitude = std::abs(base);
    Vector c(n);
    for (Index l = 0; l < n; ++l) {
      const Interval& range = ranges[static_cast<std::size_t>(l)];
      const LinearEnvelope env = linear_envelope(spec, range);
      const double t = sign * gp.weights()(l, component);
      const Interval k = psi_range(spec, range);
      magnitude += std::abs(t) * std::max(std::abs(k.lo), std::abs(k.hi));
      if (t >= 0.0) {
        base += t * env.a_lower;
        c[l] = t * env.b_lower;
      } else {
        base += t * env.a_upper;
        c[l] = t * env.b_upper;
      }
    }
    const WeightedSup ws = weighted_phi_sup(spec, r, -c, xs);
    // the mean itself is only computed to about n eps sum |w k|
    const double roundoff = 4.0 * static_cast<double>(n + 2) * std::numeric_limits<double>::epsilon() * magnitude;
    const double lower = base - ws.value - roundoff;
    const Vector centre = r.center();
    const double v1 = value(ws.maximizer);
    const double v2 = value(centre);
    if (v2 < v1) return {lower, v2, centre};
    return {lower, v1, ws.maximizer};
  };
  return minimize(region, eval, cfg);
}

// Variance of the difference process at x; prior-difference form, clamped at zero.
double diff_variance(const TrainedGP& gp, const Vector& x_star, const Vector& x) {
  return difference_moments(gp, x_star, x).cov(0, 0);
}

// sup over the region of the prior Var[z(c) - z(x)]; bounds the posterior one too.
double prior_spread(const KernelSpec& spec, const Box& r, const Vector& c) {
  const double d2 = kernel_eval(spec, c, c) + self_covariance_range(spec, r).hi -
                    2.0 * psi_range(spec, phi_range(spec, r, c)).lo;
  return std::max(d2, 0.0);
}

// Posterior standard deviation is a (pseudo)norm, so
// sqrt(v(x)) <= sqrt(v(c)) + sd[z(c) - z(x)] for any x in the region.
double triangle_bound(double v_centre, double spread) {
  const double s = std::sqrt(std::max(v_centre, 0.0)) + std::sqrt(spread);
  return s * s;
}

// Per-training-point kernel value ranges over the region.
void kernel_row_ranges(const KernelSpec& spec, const Box& r, const RowMatrix& xs, Vector& lo, Vector& hi) {
  const auto ranges = phi_ranges(spec, r, xs);
  lo.resize(xs.rows());
  hi.resize(xs.rows());
  for (Index l = 0; l < xs.rows(); ++l) {
    const Interval s = psi_range(spec, ranges[static_cast<std::size_t>(l)]);
    lo[l] = s.lo;
    hi[l] = s.hi;
  }
}

}  // namespace

void BnBConfig::validate() const {
  require(tolerance > 0.0, "branch-and-bound tolerance must be positive");
  require(variance_rel_tolerance > 0.0, "variance_rel_tolerance must be positive");
  require(max_regions >= 1, "branch-and-bound max_regions must be at least 1");
  require(qp_max_iter >= 1, "qp_max_iter must be at least 1");
}

BoundResult mean_inf_bounds(const TrainedGP& gp, const Box& region, Index component, const BnBConfig& cfg) {
  return signed_mean_inf(gp, region, component, 1.0, cfg);
}

BoundResult mean_sup_bounds(const TrainedGP& gp, const Box& region, Index component, const BnBConfig& cfg) {
  return negate(signed_mean_inf(gp, region, component, -1.0, cfg));
}

double mu_o_sup(const TrainedGP& gp, const Vector& x_star, const Box& region, Index component,
                const BnBConfig& cfg) {
  if (region.is_point() && region.contains(x_star)) return 0.0;
  return posterior_mean(gp, x_star, component) - mean_inf_bounds(gp, region, component, cfg).lower;
}

double mu_o_l1_sup(const TrainedGP& gp, const Vector& x_star, const Box& region, const BnBConfig& cfg) {
  if (region.is_point() && region.contains(x_star)) return 0.0;
  double total = 0.0;
  for (Index i = 0; i < gp.output_dim(); ++i) {
    const double at_star = posterior_mean(gp, x_star, i);
    const double up = at_star - mean_inf_bounds(gp, region, i, cfg).lower;
    const double down = mean_sup_bounds(gp, region, i, cfg).upper - at_star;
    total += std::max({up, down, 0.0});
  }
  return total;
}

BoundResult variance_sup_bounds(const TrainedGP& gp, const Vector& x_star, const Box& region, const BnBConfig& cfg) {
  require(region.dim() == gp.input_dim() && x_star.size() == gp.input_dim(),
          "box or point dimension differs from the GP input dimension");
  const KernelSpec& spec = gp.spec();
  const RowMatrix& xs = gp.data().inputs;
  const Index n = gp.size();
  const Vector k_star = gp.kernel_row(x_star);
  const double k_ss = kernel_eval(spec, x_star, x_star);
  BoxQPOptions opts;
  opts.max_iter = cfg.qp_max_iter;
  opts.gap_tol = cfg.qp_gap_tol;

  // minimise the negated variance
  Evaluator eval = [&](const Box& r, double incumbent) -> RegionEval {
    if (r.is_point()) {
      const double v = diff_variance(gp, x_star, r.lower());
      return {-v, -v, r.lower()};
    }
    const Vector centre = r.center();
    const double v = diff_variance(gp, x_star, centre);
    const double tri = triangle_bound(v, prior_spread(spec, r, centre));
    // decoupled relaxation: constant part minus a box QP in the kernel row
    const double c = k_ss + self_covariance_range(spec, r).hi - 2.0 * psi_range(spec, phi_range(spec, r, x_star)).lo;
    double relaxed = c;
    if (n > 0) {
      Vector lo, hi;
      kernel_row_ranges(spec, r, xs, lo, hi);
      BoxQPOptions o = opts;
      o.target = incumbent + c;
      o.abandon = c - tri;
      relaxed = c - box_qp_min(gp.gram_inverse(), gp.gram_inverse_norm(), k_star, lo, hi, o).lower_bound;
    }
    return {-std::min(tri, relaxed), -v, centre};
  };
  return negate(minimize(region, eval, cfg, true));
}

BoundResult variance_self_sup(const TrainedGP& gp, const Box& region, const BnBConfig& cfg) {
  require(region.dim() == gp.input_dim(), "box dimension differs from the GP input dimension");
  const KernelSpec& spec = gp.spec();
  const RowMatrix& xs = gp.data().inputs;
  const Index n = gp.size();
  const Vector zero = Vector::Zero(n);
  BoxQPOptions opts;
  opts.max_iter = cfg.qp_max_iter;
  opts.gap_tol = cfg.qp_gap_tol;

  Evaluator eval = [&](const Box& r, double incumbent) -> RegionEval {
    if (r.is_point()) {
      const double v = posterior_var(gp, r.lower());
      return {-v, -v, r.lower()};
    }
    const Vector centre = r.center();
    const double v = posterior_var(gp, centre);
    const double tri = triangle_bound(v, prior_spread(spec, r, centre));
    const double self_hi = self_covariance_range(spec, r).hi;
    double relaxed = self_hi;
    if (n > 0) {
      Vector lo, hi;
      kernel_row_ranges(spec, r, xs, lo, hi);
      BoxQPOptions o = opts;
      o.target = incumbent + self_hi;
      o.abandon = self_hi - tri;
      relaxed = self_hi - box_qp_min(gp.gram_inverse(), gp.gram_inverse_norm(), zero, lo, hi, o).lower_bound;
    }
    return {-std::min(tri, relaxed), -v, centre};
  };
  return negate(minimize(region, eval, cfg, true));
}

double lipschitz_bound(const KernelSpec& spec, const Box& region) {
  require(region.dim() == spec.dim(), "box dimension differs from the kernel dimension");
  const double s2 = spec.sigma2();
  const double theta_max = spec.theta().size() > 0 ? spec.theta().maxCoeff() : 0.0;
  switch (spec.family()) {
    case KernelFamily::SquaredExponential:
      // d^2 <= 2 s2 (1 - exp(-phi)) <= 2 s2 min(1, theta_max |dx|^2)
      return std::sqrt(2.0) * std::sqrt(s2) * std::max(1.0, std::sqrt(theta_max));
    case KernelFamily::RationalQuadratic:
    case KernelFamily::MaternHalfInteger: {
      // convex decreasing psi: psi(0) - psi(phi) <= |psi'(0)| phi
      const double slope = -psi_derivative(spec, 0.0);
      if (!std::isfinite(slope)) return kInf;
      const double phi_scale = spec.family() == KernelFamily::MaternHalfInteger ? spec.matern_scale() : 1.0;
      return std::sqrt(2.0 * slope * phi_scale * theta_max);
    }
    case KernelFamily::Periodic: {
      // sin^2(p dx) <= p^2 dx^2
      double lphi = 0.0;
      for (Index j = 0; j < spec.dim(); ++j) lphi = std::max(lphi, spec.theta()[j] * spec.freq()[j] * spec.freq()[j]);
      return std::sqrt(2.0 * (0.5 * s2) * lphi);
    }
    case KernelFamily::Linear:
      return std::sqrt(s2);
    case KernelFamily::ReluDeep: {
      // On the sphere d^2 <= 2 (psi(1) - psi(phi)) <= psi'(1) k2 |u1 - u2|^2 by convexity,
      // and x -> x/|x| is 1/r_min Lipschitz outside the ball of radius r_min.
      const double rmin = region.min_norm();
      if (rmin <= 0.0) return kInf;
      return std::sqrt(spec.relu_k2() * psi_derivative(spec, 1.0)) / rmin;
    }
  }
  return kInf;
}

double sup_d_bound(double xi_upper) {
  require(xi_upper >= 0.0, "sup_d_bound: negative variance bound");
  return 2.0 * std::sqrt(xi_upper);
}

}  // namespace gpcert
