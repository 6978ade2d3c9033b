#include "gpcert/dudley.hpp"

#include "gpcert/types.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace gpcert {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[static_cast<std::size_t>(j)];
    const double fsum = f(c - dx) + f(c + dx);
    kron += kWgk[static_cast<std::size_t>(j)] * fsum;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * fsum;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

double dudley_bound(double K, double D, int m_eff, double sup_d, double quad_tol) {
  require(K >= 0.0 && D >= 0.0 && sup_d >= 0.0 && m_eff >= 0, "dudley_bound: negative argument");
  require(quad_tol > 0.0, "dudley_bound: quadrature tolerance must be positive");
  const double a = 0.5 * sup_d;
  if (a == 0.0 || m_eff == 0 || D == 0.0 || K == 0.0) return 0.0;
  if (!std::isfinite(K) || !std::isfinite(sup_d)) return std::numeric_limits<double>::infinity();

  const double m = static_cast<double>(m_eff);
  const double beta = std::sqrt(m) * K * D / a;
  // integrand in u after z = a exp(-u); log1p keeps small beta accurate
  auto g = [&](double u) {
    const double e = std::exp(-u);
    return e * std::sqrt(m * std::log1p(beta / e));
  };

  // tail past U: ln(1 + beta e^u) <= ln(1 + beta) + u and sqrt is concave
  const double log_b = std::log1p(beta);
  auto tail = [&](double u) {
    const double s = std::sqrt(log_b + u);
    return std::sqrt(m) * std::exp(-u) * (s + 0.5 / s);
  };
  double upper = 40.0;
  while (tail(upper) > 1e-3 * quad_tol * g(0.0) && upper < 700.0) upper += 10.0;

  std::priority_queue<Segment> work;
  double total = 0.0;
  double error = 0.0;
  for (int k = 0; k < 8; ++k) {
    const Segment s = gk15(g, upper * k / 8.0, upper * (k + 1) / 8.0);
    total += s.value;
    error += s.error;
    work.push(s);
  }
  for (int it = 0; it < 2000 && error > std::max(1e-14, quad_tol * std::abs(total)); ++it) {
    const Segment worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment l = gk15(g, worst.a, mid);
    const Segment r = gk15(g, mid, worst.b);
    total += l.value + r.value - worst.value;
    error += l.error + r.error - worst.error;
    work.push(l);
    work.push(r);
  }
  return 12.0 * a * (total + std::abs(error) + tail(upper));
}

}  // namespace gpcert
