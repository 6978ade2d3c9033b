#include "gpcert/envelope.hpp"

#include <functional>

namespace gpcert {

namespace {

struct Line {
  double a;
  double b;
  [[nodiscard]] double at(double x) const { return a + b * x; }
};

Line through(double x0, double y0, double x1, double y1) {
  const double b = (y1 - y0) / (x1 - x0);
  return {y0 - b * x0, b};
}

// Lower line of sign*psi on [lo, hi], which contains no flex point in its interior.
Line piece_lower(const KernelSpec& spec, double sign, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double curvature = sign * psi_second_derivative(spec, mid);
  if (curvature >= 0.0) {
    const double slope = sign * psi_derivative(spec, mid);
    return {sign * psi_eval(spec, mid) - slope * mid, slope};
  }
  return through(lo, sign * psi_eval(spec, lo), hi, sign * psi_eval(spec, hi));
}

// f1 is a lower line on [lo, c], f2 on [c, hi]; returns one line valid on [lo, hi].
Line fold(Line f1, Line f2, double lo, double c, double hi) {
  if (f2.at(c) <= f1.at(c)) return through(lo, std::min(f1.at(lo), f2.at(lo)), hi, f2.at(hi));
  return through(lo, f1.at(lo), hi, std::min(f1.at(hi), f2.at(hi)));
}

Line lower_line(const KernelSpec& spec, double sign, Interval phi) {
  const auto flex = psi_flex_points(spec, phi);
  std::vector<double> cuts;
  cuts.push_back(phi.lo);
  cuts.insert(cuts.end(), flex.begin(), flex.end());
  cuts.push_back(phi.hi);
  Line acc = piece_lower(spec, sign, cuts[0], cuts[1]);
  for (std::size_t k = 1; k + 1 < cuts.size(); ++k) {
    const Line next = piece_lower(spec, sign, cuts[k], cuts[k + 1]);
    acc = fold(acc, next, phi.lo, cuts[k], cuts[k + 1]);
  }
  return acc;
}

}  // namespace

LinearEnvelope linear_envelope(const KernelSpec& spec, Interval phi) {
  if (!(phi.lo <= phi.hi)) throw DomainError("linear_envelope: empty phi interval");
  LinearEnvelope env;
  env.interval = phi;
  if (phi.degenerate()) {
    const double v = psi_eval(spec, phi.lo);
    env.a_lower = env.a_upper = v;
    return env;
  }
  // endpoint evaluation doubles as the domain check
  (void)psi_eval(spec, phi.lo);
  (void)psi_eval(spec, phi.hi);
  const Line lo = lower_line(spec, 1.0, phi);
  const Line hi = lower_line(spec, -1.0, phi);
  env.a_lower = lo.a;
  env.b_lower = lo.b;
  env.a_upper = -hi.a;
  env.b_upper = -hi.b;
  return env;
}

}  // namespace gpcert
