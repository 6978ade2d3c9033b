#include "gpcert/kernels.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace gpcert {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
// Tolerance for phi values that drift just outside the psi domain.
constexpr double kDomainSlack = 1e-12;

double sq(double v) { return v * v; }

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void check_dims(const KernelSpec& spec, Index a, Index b) {
  if (a != spec.dim() || b != spec.dim()) {
    throw InputError("kernel input dimension mismatch: expected " + std::to_string(spec.dim()) + ", got " +
                     std::to_string(a) + " and " + std::to_string(b));
  }
}

// Value and first two phi-derivatives of the depth-L ReLU psi.
struct Jet {
  double value;
  double d1;
  double d2;
};

Jet relu_jet(const KernelSpec& spec, double phi) {
  const double g = spec.sigma_w2() / (2.0 * kPi);
  double c_prev = spec.relu_diag(0);
  double s = c_prev * phi;
  double ds = c_prev;
  double d2s = 0.0;
  for (int l = 1; l <= spec.layers(); ++l) {
    const double rho = std::clamp(s / c_prev, -1.0, 1.0);
    const double beta = std::acos(rho);
    const double j0 = std::sqrt(std::max(0.0, 1.0 - rho * rho)) + rho * (kPi - beta);
    const double j1 = kPi - beta;
    const double one_minus = 1.0 - rho * rho;
    // J'' = 1/sqrt(1 - rho^2) blows up at |rho| = 1; the product with ds^2 is 0 when ds is.
    double curvature_term = 0.0;
    if (ds != 0.0) curvature_term = one_minus > 0.0 ? ds * ds / (c_prev * std::sqrt(one_minus)) : kInf;
    const double next_d2 = g * (curvature_term + j1 * d2s);
    const double next_d1 = g * j1 * ds;
    s = spec.sigma_b2() + g * c_prev * j0;
    ds = next_d1;
    d2s = next_d2;
    c_prev = spec.relu_diag(l);
  }
  return {s, ds, d2s};
}

double relu_phi(const KernelSpec& spec, ConstVectorRef x1, ConstVectorRef x2) {
  const double n1 = x1.norm();
  const double n2 = x2.norm();
  double cosine = 0.0;
  if (n1 > 0.0 && n2 > 0.0) cosine = std::clamp(x1.dot(x2) / (n1 * n2), -1.0, 1.0);
  return spec.relu_k1() + spec.relu_k2() * cosine;
}

// Literal layer recursion on x/|x|.
double relu_kernel(const KernelSpec& spec, ConstVectorRef x1, ConstVectorRef x2) {
  const double m = static_cast<double>(spec.dim());
  const double n1 = x1.norm();
  const double n2 = x2.norm();
  const double sw = spec.sigma_w2();
  const double sb = spec.sigma_b2();
  const double dot = (n1 > 0.0 && n2 > 0.0) ? x1.dot(x2) / (n1 * n2) : 0.0;
  double s12 = sb + sw / m * dot;
  double s11 = sb + sw / m * (n1 > 0.0 ? 1.0 : 0.0);
  double s22 = sb + sw / m * (n2 > 0.0 ? 1.0 : 0.0);
  for (int l = 1; l <= spec.layers(); ++l) {
    const double denom = std::sqrt(s11 * s22);
    const double rho = denom > 0.0 ? std::clamp(s12 / denom, -1.0, 1.0) : 0.0;
    const double beta = std::acos(rho);
    s12 = sb + sw / (2.0 * kPi) * denom * (std::sin(beta) + (kPi - beta) * std::cos(beta));
    s11 = sb + 0.5 * sw * s11;
    s22 = sb + 0.5 * sw * s22;
  }
  return s12;
}

double poly_eval(const std::vector<double>& coeffs, double s) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * s + *it;
  return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& coeffs) {
  std::vector<double> out;
  for (std::size_t d = 1; d < coeffs.size(); ++d) out.push_back(static_cast<double>(d) * coeffs[d]);
  return out;
}

// Coefficients of (P' - P) / s, valid when (P' - P)(0) = 0 (p >= 1).
std::vector<double> matern_slope_poly(const std::vector<double>& p) {
  std::vector<double> diff(p.size(), 0.0);
  const auto dp = poly_derivative(p);
  for (std::size_t d = 0; d < p.size(); ++d) diff[d] = (d < dp.size() ? dp[d] : 0.0) - p[d];
  return {diff.begin() + 1, diff.end()};
}

double matern_k_p(int p) { return factorial(p) / factorial(2 * p); }

// Range of (x - a)^2 over x in [lo, hi].
Interval squared_offset_range(double lo, double hi, double a) {
  const double dl = sq(lo - a);
  const double dh = sq(hi - a);
  const double mn = (a >= lo && a <= hi) ? 0.0 : std::min(dl, dh);
  return {mn, std::max(dl, dh)};
}

// Range of sin^2(u) over u in [lo, hi].
Interval sin_squared_range(double lo, double hi) {
  const double a = sq(std::sin(lo));
  const double b = sq(std::sin(hi));
  Interval r{std::min(a, b), std::max(a, b)};
  if (std::ceil((lo - kPi / 2) / kPi) <= std::floor((hi - kPi / 2) / kPi)) r.hi = 1.0;
  if (std::ceil(lo / kPi) <= std::floor(hi / kPi)) r.lo = 0.0;
  return r;
}

// Upper bound on v.x/|x| over a box given s = sup v.x and the norm range.
double cosine_sup(double s, double vnorm, double rmin, double rmax) {
  if (s > 0.0) return rmin > 0.0 ? std::min(s / rmin, vnorm) : vnorm;
  if (s == 0.0) return 0.0;
  return s / rmax;
}

// sup of v.x over the box and a corner attaining it.
double linear_sup(const Vector& v, const Box& region, Vector* corner) {
  double s = 0.0;
  for (Index j = 0; j < v.size(); ++j) {
    const double x = v[j] > 0.0 ? region.upper(j) : region.lower(j);
    if (corner) (*corner)[j] = x;
    s += v[j] * x;
  }
  return s;
}

Interval relu_cosine_range(const Vector& unit_anchor, const Box& region, double rmin, double rmax) {
  const double s_hi = linear_sup(unit_anchor, region, nullptr);
  const double s_lo = -linear_sup(-unit_anchor, region, nullptr);
  const double vnorm = unit_anchor.norm();
  const double hi = cosine_sup(s_hi, vnorm, rmin, rmax);
  const double lo = -cosine_sup(-s_lo, vnorm, rmin, rmax);
  return {std::max(lo, -1.0), std::min(hi, 1.0)};
}

Interval phi_range_impl(const KernelSpec& spec, const Box& region, ConstVectorRef anchor, double rmin,
                        double rmax) {
  if (region.is_point()) {
    const double v = phi_eval(spec, region.lower(), anchor);
    return {v, v};
  }
  const Index m = spec.dim();
  switch (spec.family()) {
    case KernelFamily::SquaredExponential:
    case KernelFamily::RationalQuadratic:
    case KernelFamily::MaternHalfInteger: {
      const double scale = spec.family() == KernelFamily::MaternHalfInteger ? spec.matern_scale() : 1.0;
      Interval r{0.0, 0.0};
      for (Index j = 0; j < m; ++j) {
        const Interval d = squared_offset_range(region.lower(j), region.upper(j), anchor[j]);
        r.lo += scale * spec.theta()[j] * d.lo;
        r.hi += scale * spec.theta()[j] * d.hi;
      }
      return r;
    }
    case KernelFamily::Periodic: {
      Interval r{0.0, 0.0};
      for (Index j = 0; j < m; ++j) {
        const double p = std::abs(spec.freq()[j]);
        const Interval s = sin_squared_range(p * (region.lower(j) - anchor[j]), p * (region.upper(j) - anchor[j]));
        r.lo += spec.theta()[j] * s.lo;
        r.hi += spec.theta()[j] * s.hi;
      }
      return r;
    }
    case KernelFamily::Linear: {
      Interval r{0.0, 0.0};
      for (Index j = 0; j < m; ++j) {
        const double c = anchor[j] - spec.theta()[j];
        const double a = (region.lower(j) - spec.theta()[j]) * c;
        const double b = (region.upper(j) - spec.theta()[j]) * c;
        r.lo += std::min(a, b);
        r.hi += std::max(a, b);
      }
      return r;
    }
    case KernelFamily::ReluDeep: {
      const double n = anchor.norm();
      if (n == 0.0) return {spec.relu_k1(), spec.relu_k1()};
      const Interval c = relu_cosine_range(anchor / n, region, rmin, rmax);
      return {spec.relu_k1() + spec.relu_k2() * c.lo, spec.relu_k1() + spec.relu_k2() * c.hi};
    }
  }
  throw InputError("unknown kernel family");
}

}  // namespace

std::string_view family_name(KernelFamily family) {
  switch (family) {
    case KernelFamily::SquaredExponential: return "squared-exponential";
    case KernelFamily::ReluDeep: return "relu-deep";
    case KernelFamily::RationalQuadratic: return "rational-quadratic";
    case KernelFamily::Linear: return "linear";
    case KernelFamily::Periodic: return "periodic";
    case KernelFamily::MaternHalfInteger: return "matern-half-integer";
  }
  return "unknown";
}

KernelFamily family_from_name(std::string_view name) {
  for (auto f : {KernelFamily::SquaredExponential, KernelFamily::ReluDeep, KernelFamily::RationalQuadratic,
                 KernelFamily::Linear, KernelFamily::Periodic, KernelFamily::MaternHalfInteger}) {
    if (family_name(f) == name) return f;
  }
  throw InputError("unknown kernel family '" + std::string(name) + "'");
}

KernelSpec KernelSpec::squared_exponential(double sigma2, Vector theta) {
  KernelSpec s;
  s.family_ = KernelFamily::SquaredExponential;
  s.sigma2_ = sigma2;
  s.dim_ = theta.size();
  s.theta_ = std::move(theta);
  s.finalize();
  return s;
}

KernelSpec KernelSpec::relu_deep(int layers, double sigma_w2, double sigma_b2, Index dim) {
  KernelSpec s;
  s.family_ = KernelFamily::ReluDeep;
  s.layers_ = layers;
  s.sigma_w2_ = sigma_w2;
  s.sigma_b2_ = sigma_b2;
  s.dim_ = dim;
  s.finalize();
  return s;
}

KernelSpec KernelSpec::rational_quadratic(double sigma2, double alpha, Vector theta) {
  KernelSpec s;
  s.family_ = KernelFamily::RationalQuadratic;
  s.sigma2_ = sigma2;
  s.alpha_ = alpha;
  s.dim_ = theta.size();
  s.theta_ = std::move(theta);
  s.finalize();
  return s;
}

KernelSpec KernelSpec::linear(double sigma2, Vector offsets) {
  KernelSpec s;
  s.family_ = KernelFamily::Linear;
  s.sigma2_ = sigma2;
  s.dim_ = offsets.size();
  s.theta_ = std::move(offsets);
  s.finalize();
  return s;
}

KernelSpec KernelSpec::periodic(double sigma2, Vector theta, Vector freq) {
  KernelSpec s;
  s.family_ = KernelFamily::Periodic;
  s.sigma2_ = sigma2;
  s.dim_ = theta.size();
  s.theta_ = std::move(theta);
  s.freq_ = std::move(freq);
  s.finalize();
  return s;
}

KernelSpec KernelSpec::matern(double sigma2, Vector theta, int p) {
  KernelSpec s;
  s.family_ = KernelFamily::MaternHalfInteger;
  s.sigma2_ = sigma2;
  s.matern_p_ = p;
  s.dim_ = theta.size();
  s.theta_ = std::move(theta);
  s.finalize();
  return s;
}

void KernelSpec::finalize() {
  require(dim_ >= 1, "kernel input dimension must be at least 1");
  if (family_ == KernelFamily::ReluDeep) {
    require(layers_ >= 1, "relu-deep kernel needs at least one layer");
    require(sigma_w2_ > 0.0 && std::isfinite(sigma_w2_), "relu-deep sigma_w2 must be positive");
    require(sigma_b2_ >= 0.0 && std::isfinite(sigma_b2_), "relu-deep sigma_b2 must be non-negative");
    relu_diag_.assign(static_cast<std::size_t>(layers_) + 1, 0.0);
    relu_diag_[0] = sigma_b2_ + sigma_w2_ / static_cast<double>(dim_);
    for (std::size_t l = 1; l < relu_diag_.size(); ++l) relu_diag_[l] = sigma_b2_ + 0.5 * sigma_w2_ * relu_diag_[l - 1];
    flex_points_ = scan_flex_points(*this, psi_domain());
    return;
  }
  require(sigma2_ > 0.0 && std::isfinite(sigma2_), "kernel sigma2 must be positive");
  if (family_ != KernelFamily::Linear) {
    for (Index j = 0; j < theta_.size(); ++j) require(theta_[j] >= 0.0, "kernel theta must be non-negative");
  }
  if (family_ == KernelFamily::RationalQuadratic) require(alpha_ > 0.0, "rational-quadratic alpha must be positive");
  if (family_ == KernelFamily::Periodic) {
    require(freq_.size() == dim_, "periodic kernel needs one frequency per dimension");
  }
  if (family_ == KernelFamily::MaternHalfInteger) {
    require(matern_p_ >= 0 && matern_p_ <= 2, "matern kernel supports p in {0, 1, 2}");
    const int p = matern_p_;
    matern_poly_.assign(static_cast<std::size_t>(p) + 1, 0.0);
    for (int l = 0; l <= p; ++l) {
      matern_poly_[static_cast<std::size_t>(p - l)] =
          factorial(p + l) / (factorial(l) * factorial(p - l)) * std::pow(2.0, p - l);
    }
  }
}

double KernelSpec::relu_k1() const {
  const double c0 = sigma_b2_ + sigma_w2_ / static_cast<double>(dim_);
  return sigma_b2_ / c0;
}

double KernelSpec::relu_k2() const {
  const double c0 = sigma_b2_ + sigma_w2_ / static_cast<double>(dim_);
  return (sigma_w2_ / static_cast<double>(dim_)) / c0;
}

bool KernelSpec::stationary() const {
  return family_ != KernelFamily::ReluDeep && family_ != KernelFamily::Linear;
}

Interval KernelSpec::psi_domain() const {
  switch (family_) {
    case KernelFamily::ReluDeep: return {-1.0, 1.0};
    case KernelFamily::Linear: return {-kInf, kInf};
    default: return {0.0, kInf};
  }
}

KernelSpec KernelSpec::with_param(const std::string& name, double value) const {
  KernelSpec out = *this;
  auto indexed = [&](const std::string& prefix, Vector& target) {
    if (name == prefix) {
      target.setConstant(value);
      return true;
    }
    if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size()) {
      const long j = std::stol(name.substr(prefix.size()));
      require(j >= 0 && j < target.size(), "hyperparameter index out of range: " + name);
      target[j] = value;
      return true;
    }
    return false;
  };
  if (name == "sigma2") out.sigma2_ = value;
  else if (name == "alpha") out.alpha_ = value;
  else if (name == "p") out.matern_p_ = static_cast<int>(std::lround(value));
  else if (name == "layers") out.layers_ = static_cast<int>(std::lround(value));
  else if (name == "sigma_w2") out.sigma_w2_ = value;
  else if (name == "sigma_b2") out.sigma_b2_ = value;
  else if (indexed("theta", out.theta_)) {}
  else if (indexed("freq", out.freq_)) {}
  else throw InputError("unknown kernel hyperparameter '" + name + "'");
  out.finalize();
  return out;
}

double kernel_eval(const KernelSpec& spec, ConstVectorRef x1, ConstVectorRef x2) {
  check_dims(spec, x1.size(), x2.size());
  if (spec.family() == KernelFamily::ReluDeep) return relu_kernel(spec, x1, x2);
  if (spec.family() == KernelFamily::Linear) {
    const auto& th = spec.theta();
    return spec.sigma2() * (x1 - th).dot(x2 - th);
  }
  return psi_eval(spec, phi_eval(spec, x1, x2));
}

double phi_eval(const KernelSpec& spec, ConstVectorRef x1, ConstVectorRef x2) {
  check_dims(spec, x1.size(), x2.size());
  const auto& th = spec.theta();
  switch (spec.family()) {
    case KernelFamily::SquaredExponential:
    case KernelFamily::RationalQuadratic:
      return (th.array() * (x1 - x2).array().square()).sum();
    case KernelFamily::MaternHalfInteger:
      return spec.matern_scale() * (th.array() * (x1 - x2).array().square()).sum();
    case KernelFamily::Periodic: {
      double acc = 0.0;
      for (Index j = 0; j < spec.dim(); ++j) acc += th[j] * sq(std::sin(spec.freq()[j] * (x1[j] - x2[j])));
      return acc;
    }
    case KernelFamily::Linear:
      return (x1 - th).dot(x2 - th);
    case KernelFamily::ReluDeep:
      return relu_phi(spec, x1, x2);
  }
  throw InputError("unknown kernel family");
}

namespace {

double checked_phi(const KernelSpec& spec, double phi) {
  const Interval dom = spec.psi_domain();
  if (!(phi >= dom.lo - kDomainSlack && phi <= dom.hi + kDomainSlack)) {
    throw DomainError("phi = " + std::to_string(phi) + " outside the psi domain of the " +
                      std::string(family_name(spec.family())) + " kernel");
  }
  return std::clamp(phi, dom.lo, dom.hi);
}

}  // namespace

double psi_eval(const KernelSpec& spec, double phi) {
  phi = checked_phi(spec, phi);
  const double s2 = spec.sigma2();
  switch (spec.family()) {
    case KernelFamily::SquaredExponential: return s2 * std::exp(-phi);
    case KernelFamily::RationalQuadratic: return s2 * std::pow(1.0 + 0.5 * phi, -spec.alpha());
    case KernelFamily::Linear: return s2 * phi;
    case KernelFamily::Periodic: return s2 * std::exp(-0.5 * phi);
    case KernelFamily::MaternHalfInteger: {
      const int p = spec.matern_p();
      const auto& poly = spec.matern_poly();
      const double s = std::sqrt(phi);
      return s2 * matern_k_p(p) * std::exp(-s) * poly_eval(poly, s);
    }
    case KernelFamily::ReluDeep: return relu_jet(spec, phi).value;
  }
  throw InputError("unknown kernel family");
}

double psi_derivative(const KernelSpec& spec, double phi) {
  phi = checked_phi(spec, phi);
  const double s2 = spec.sigma2();
  switch (spec.family()) {
    case KernelFamily::SquaredExponential: return -s2 * std::exp(-phi);
    case KernelFamily::RationalQuadratic:
      return -0.5 * spec.alpha() * s2 * std::pow(1.0 + 0.5 * phi, -spec.alpha() - 1.0);
    case KernelFamily::Linear: return s2;
    case KernelFamily::Periodic: return -0.5 * s2 * std::exp(-0.5 * phi);
    case KernelFamily::MaternHalfInteger: {
      const int p = spec.matern_p();
      const double s = std::sqrt(phi);
      if (p == 0) return s > 0.0 ? -s2 * std::exp(-s) / (2.0 * s) : -kInf;
      const auto& poly = spec.matern_poly();
      return s2 * matern_k_p(p) * std::exp(-s) * poly_eval(matern_slope_poly(poly), s) / 2.0;
    }
    case KernelFamily::ReluDeep: return relu_jet(spec, phi).d1;
  }
  throw InputError("unknown kernel family");
}

double psi_second_derivative(const KernelSpec& spec, double phi) {
  phi = checked_phi(spec, phi);
  const double s2 = spec.sigma2();
  switch (spec.family()) {
    case KernelFamily::SquaredExponential: return s2 * std::exp(-phi);
    case KernelFamily::RationalQuadratic: {
      const double a = spec.alpha();
      return 0.25 * a * (a + 1.0) * s2 * std::pow(1.0 + 0.5 * phi, -a - 2.0);
    }
    case KernelFamily::Linear: return 0.0;
    case KernelFamily::Periodic: return 0.25 * s2 * std::exp(-0.5 * phi);
    case KernelFamily::MaternHalfInteger: {
      const int p = spec.matern_p();
      const double s = std::sqrt(phi);
      if (s == 0.0) return kInf;
      if (p == 0) return s2 * std::exp(-s) * (s + 1.0) / (4.0 * s * s * s);
      const auto& poly = spec.matern_poly();
      const auto slope = matern_slope_poly(poly);
      const double num = poly_eval(poly_derivative(slope), s) - poly_eval(slope, s);
      return s2 * matern_k_p(p) * std::exp(-s) * num / (4.0 * s);
    }
    case KernelFamily::ReluDeep: return relu_jet(spec, phi).d2;
  }
  throw InputError("unknown kernel family");
}

std::vector<double> scan_flex_points(const KernelSpec& spec, Interval interval, int samples) {
  std::vector<double> flex;
  if (!(interval.hi > interval.lo) || !std::isfinite(interval.lo) || !std::isfinite(interval.hi)) return flex;
  auto sign_at = [&](double phi) {
    const double v = psi_second_derivative(spec, phi);
    if (std::isnan(v) || v == 0.0) return 0;
    return v > 0.0 ? 1 : -1;
  };
  double prev_x = interval.lo;
  int prev_sign = sign_at(prev_x);
  for (int k = 1; k < samples; ++k) {
    const double x = interval.lo + interval.width() * k / (samples - 1);
    const int sgn = sign_at(x);
    if (sgn == 0) continue;
    if (prev_sign != 0 && sgn != prev_sign) {
      // psi'' has opposite signs at the bracket ends; bisect to machine resolution
      double a = prev_x;
      double b = x;
      for (int it = 0; it < 200 && b - a > 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(a));
           ++it) {
        const double c = 0.5 * (a + b);
        const int sc = sign_at(c);
        if (sc == prev_sign) a = c;
        else b = c;
      }
      flex.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_sign = sgn;
  }
  return flex;
}

std::vector<double> psi_flex_points(const KernelSpec& spec, Interval interval) {
  std::vector<double> out;
  // Stationary psi are completely monotone in phi and the linear psi is affine:
  // no inflection. ReLU flex points come from the cached numeric scan.
  for (double f : spec.domain_flex_points()) {
    if (f > interval.lo && f < interval.hi) out.push_back(f);
  }
  return out;
}

Interval phi_range(const KernelSpec& spec, const Box& region, ConstVectorRef anchor) {
  check_dims(spec, region.dim(), anchor.size());
  const bool relu = spec.family() == KernelFamily::ReluDeep;
  return phi_range_impl(spec, region, anchor, relu ? region.min_norm() : 0.0, relu ? region.max_norm() : 0.0);
}

std::vector<Interval> phi_ranges(const KernelSpec& spec, const Box& region, const RowMatrix& anchors) {
  check_dims(spec, region.dim(), anchors.cols());
  const bool relu = spec.family() == KernelFamily::ReluDeep;
  const double rmin = relu ? region.min_norm() : 0.0;
  const double rmax = relu ? region.max_norm() : 0.0;
  std::vector<Interval> out(static_cast<std::size_t>(anchors.rows()));
  for (Index i = 0; i < anchors.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = phi_range_impl(spec, region, anchors.row(i).transpose(), rmin, rmax);
  }
  return out;
}

Interval psi_range(const KernelSpec& spec, Interval phi) {
  const double a = psi_eval(spec, phi.lo);
  const double b = psi_eval(spec, phi.hi);
  return {std::min(a, b), std::max(a, b)};
}

Interval self_covariance_range(const KernelSpec& spec, const Box& region) {
  check_dims(spec, region.dim(), region.dim());
  switch (spec.family()) {
    case KernelFamily::ReluDeep: {
      const double c = spec.relu_diag(spec.layers());
      if (region.min_norm() > 0.0) return {c, c};
      return {std::min(psi_eval(spec, spec.relu_k1()), c), c};
    }
    case KernelFamily::Linear: {
      Interval r{0.0, 0.0};
      for (Index j = 0; j < spec.dim(); ++j) {
        const Interval d = squared_offset_range(region.lower(j), region.upper(j), spec.theta()[j]);
        r.lo += d.lo;
        r.hi += d.hi;
      }
      return {spec.sigma2() * r.lo, spec.sigma2() * r.hi};
    }
    default: {
      const double v = psi_eval(spec, 0.0);
      return {v, v};
    }
  }
}

WeightedSup weighted_phi_sup(const KernelSpec& spec, const Box& region, const Vector& coeffs,
                             const RowMatrix& anchors) {
  require(coeffs.size() == anchors.rows(), "weighted_phi_sup: coefficient and anchor counts differ");
  check_dims(spec, region.dim(), anchors.cols());
  const Index m = spec.dim();
  const Index n = anchors.rows();
  WeightedSup out;
  out.maximizer = region.center();

  if (region.is_point()) {
    double acc = 0.0;
    for (Index i = 0; i < n; ++i) acc += coeffs[i] * phi_eval(spec, region.lower(), anchors.row(i).transpose());
    out.value = acc;
    return out;
  }

  switch (spec.family()) {
    case KernelFamily::SquaredExponential:
    case KernelFamily::RationalQuadratic:
    case KernelFamily::MaternHalfInteger: {
      const double scale = spec.family() == KernelFamily::MaternHalfInteger ? spec.matern_scale() : 1.0;
      const double csum = coeffs.sum();
      for (Index j = 0; j < m; ++j) {
        const double w = scale * spec.theta()[j];
        auto q = [&](double x) {
          double acc = 0.0;
          for (Index i = 0; i < n; ++i) acc += coeffs[i] * sq(x - anchors(i, j));
          return w * acc;
        };
        const double lo = region.lower(j);
        const double hi = region.upper(j);
        std::array<double, 3> cand{lo, hi, lo};
        int count = lo == hi ? 1 : 2;
        if (csum != 0.0 && lo < hi) {
          double weighted = 0.0;
          for (Index i = 0; i < n; ++i) weighted += coeffs[i] * anchors(i, j);
          cand[2] = std::clamp(weighted / csum, lo, hi);
          count = 3;
        }
        double best = q(cand[0]);
        double arg = cand[0];
        for (int k = 1; k < count; ++k) {
          const double v = q(cand[static_cast<std::size_t>(k)]);
          if (v > best) {
            best = v;
            arg = cand[static_cast<std::size_t>(k)];
          }
        }
        out.value += best;
        out.maximizer[j] = arg;
      }
      return out;
    }
    case KernelFamily::Periodic: {
      for (Index j = 0; j < m; ++j) {
        const double p = std::abs(spec.freq()[j]);
        const double th = spec.theta()[j];
        auto q = [&](double x) {
          double acc = 0.0;
          for (Index i = 0; i < n; ++i) acc += coeffs[i] * sq(std::sin(p * (x - anchors(i, j))));
          return th * acc;
        };
        const double lo = region.lower(j);
        const double hi = region.upper(j);
        std::array<double, 3> cand{lo, hi, lo};
        int count = lo == hi ? 1 : 2;
        // sum_i c_i sin^2(p(x - a_i)) = C/2 - (R/2) cos(2 p x - omega); maximal where the cosine is -1
        double ca = 0.0;
        double cb = 0.0;
        for (Index i = 0; i < n; ++i) {
          ca += coeffs[i] * std::cos(2.0 * p * anchors(i, j));
          cb += coeffs[i] * std::sin(2.0 * p * anchors(i, j));
        }
        if (p > 0.0 && lo < hi && (ca != 0.0 || cb != 0.0)) {
          const double omega = std::atan2(cb, ca);
          const double k = std::ceil((2.0 * p * lo - omega - kPi) / (2.0 * kPi));
          const double x = (omega + kPi + 2.0 * kPi * k) / (2.0 * p);
          if (x >= lo && x <= hi) {
            cand[2] = x;
            count = 3;
          }
        }
        double best = q(cand[0]);
        double arg = cand[0];
        for (int k = 1; k < count; ++k) {
          const double v = q(cand[static_cast<std::size_t>(k)]);
          if (v > best) {
            best = v;
            arg = cand[static_cast<std::size_t>(k)];
          }
        }
        out.value += best;
        out.maximizer[j] = arg;
      }
      return out;
    }
    case KernelFamily::Linear: {
      Vector w = Vector::Zero(m);
      for (Index i = 0; i < n; ++i) w += coeffs[i] * (anchors.row(i).transpose() - spec.theta());
      for (Index j = 0; j < m; ++j) {
        const double x = w[j] > 0.0 ? region.upper(j) : region.lower(j);
        out.maximizer[j] = x;
        out.value += (x - spec.theta()[j]) * w[j];
      }
      return out;
    }
    case KernelFamily::ReluDeep: {
      // sum_i c_i phi(x, x_i) = k1 sum_i c_i + k2 (v . x/|x|) with v = sum_i c_i x_i/|x_i|
      Vector v = Vector::Zero(m);
      for (Index i = 0; i < n; ++i) {
        const double nrm = anchors.row(i).norm();
        if (nrm > 0.0) v += (coeffs[i] / nrm) * anchors.row(i).transpose();
      }
      const double base = spec.relu_k1() * coeffs.sum();
      if (v.squaredNorm() == 0.0) {
        out.value = base;
        return out;
      }
      const double s = linear_sup(v, region, &out.maximizer);
      out.value = base + spec.relu_k2() * cosine_sup(s, v.norm(), region.min_norm(), region.max_norm());
      out.exact = false;
      return out;
    }
  }
  throw InputError("unknown kernel family");
}

}  // namespace gpcert
