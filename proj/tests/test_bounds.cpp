#include "doctest.h"

#include "gpcert/bounds.hpp"
#include "gpcert/datasets.hpp"
#include "gpcert/parallel.hpp"
#include "gpcert/sampling.hpp"

#include <numbers>
#include <random>

using namespace gpcert;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Dataset random_dataset(int n, std::uint64_t seed, Index m = 2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Dataset d{RowMatrix(n, m), Matrix(n, 2)};
  for (int i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) d.inputs(i, j) = u(rng);
    d.targets(i, 0) = std::sin(2.0 * d.inputs(i, 0)) + d.inputs(i, 1);
    d.targets(i, 1) = d.inputs(i, 0) * d.inputs(i, 1);
  }
  return d;
}

const TrainedGP& example_gp() {
  static const TrainedGP gp = [] {
    const Dataset d = make_saddle_dataset();
    const HyperGrid grid{{"sigma2", {0.01, 0.03, 0.1, 0.3, 1.0, 3.0}},
                         {"theta", {0.01, 0.03, 0.1, 0.3, 1.0}},
                         {"noise", {1e-4, 1e-3, 1e-2}}};
    const auto best = hyper_grid_search(KernelSpec::squared_exponential(1.0, Vector::Ones(2)), d, grid);
    return TrainedGP::fit(best.spec, d, best.jitter);
  }();
  return gp;
}

}  // namespace

TEST_CASE("mean bounds bracket grid extrema across kernel families") {
  const Dataset d = random_dataset(20, 1);
  const std::vector<KernelSpec> kernels = {
      KernelSpec::squared_exponential(1.0, vec({1.5, 0.8})),
      KernelSpec::rational_quadratic(1.0, 2.0, vec({1.0, 1.0})),
      KernelSpec::matern(1.0, vec({1.0, 0.5}), 1),
      KernelSpec::periodic(1.0, vec({1.0, 1.0}), vec({0.8, 0.6})),
      KernelSpec::linear(1.0, vec({0.1, 0.1})),
      KernelSpec::relu_deep(2, 3.19, 0.1, 2),
  };
  const Box region(vec({0.3, -0.6}), vec({0.8, -0.2}));
  const RowMatrix grid = grid_points(region, 101);
  for (const auto& k : kernels) {
    CAPTURE(family_name(k.family()));
    const auto gp = TrainedGP::fit(k, d, 1e-4);
    const Matrix mu = omp::posterior_mean_grid(gp, grid);
    for (Index o = 0; o < 2; ++o) {
      const auto inf = mean_inf_bounds(gp, region, o);
      const auto sup = mean_sup_bounds(gp, region, o);
      CHECK(inf.lower <= mu.col(o).minCoeff() + 1e-12);
      CHECK(inf.upper >= inf.lower);
      CHECK(sup.upper >= mu.col(o).maxCoeff() - 1e-12);
      CHECK(region.contains(inf.witness));
      CHECK(posterior_mean(gp, inf.witness, o) == doctest::Approx(inf.upper).epsilon(1e-12));
      if (inf.converged) CHECK(inf.upper - inf.lower <= 1e-3 + 1e-12);
      if (sup.converged) CHECK(sup.upper - sup.lower <= 1e-3 + 1e-12);
    }
  }
}

TEST_CASE("mean bounds on the regression example") {
  const TrainedGP& gp = example_gp();
  for (const Vector& c : {vec({0.0, 0.0}), vec({3.0, 3.0})}) {
    const Box region = Box::around(c, 0.1);
    const RowMatrix grid = grid_points(region, 201);
    const Matrix mu = omp::posterior_mean_grid(gp, grid);
    const auto inf = mean_inf_bounds(gp, region, 0);
    CHECK(inf.converged);
    CHECK(inf.lower <= mu.minCoeff() + 1e-12);
    CHECK(inf.upper - inf.lower <= 1e-3);
    // mu_o sup against the grid
    const double at_c = posterior_mean(gp, c, 0);
    CHECK(mu_o_sup(gp, c, region, 0) >= at_c - mu.minCoeff() - 1e-12);
    const double l1 = std::max((at_c - mu.array()).abs().maxCoeff(), 0.0);
    CHECK(mu_o_l1_sup(gp, c, region) >= l1 - 1e-12);
  }
}

TEST_CASE("variance bounds dominate grid suprema") {
  const TrainedGP& gp = example_gp();
  for (const Vector& c : {vec({0.0, 0.0}), vec({3.0, 3.0})}) {
    const Box region = Box::around(c, 0.1);
    const RowMatrix grid = grid_points(region, 201);
    double grid_sup = 0.0;
    for (Index p = 0; p < grid.rows(); ++p)
      grid_sup = std::max(grid_sup, difference_moments(gp, c, grid.row(p).transpose()).cov(0, 0));
    const auto xi = variance_sup_bounds(gp, c, region);
    CHECK(xi.upper >= grid_sup - 1e-9);
    CHECK(xi.lower <= xi.upper);
    CHECK(xi.upper <= 3.0 * grid_sup);

    const Vector var = omp::posterior_var_grid(gp, grid);
    const auto self = variance_self_sup(gp, region);
    CHECK(self.upper >= var.maxCoeff() - 1e-9);
  }
  // x = (3.1, 3.1): positive difference variance, checked against sampling
  const Vector xs = vec({3.0, 3.0});
  const Vector x = vec({3.1, 3.1});
  const double v = difference_moments(gp, xs, x).cov(0, 0);
  CHECK(v > 0.0);
  RowMatrix one(1, 2);
  one.row(0) = x.transpose();
  SamplingOptions so;
  so.n_samples = 20000;
  so.seed = 5;
  const auto stats = omp::sample_sup_statistics(gp, xs, one, so);
  // the drop column holds max(0, Z) with Z = f(x*) - f(x) ~ N(mean_diff, v)
  const double mean_diff = posterior_mean(gp, xs, 0) - posterior_mean(gp, x, 0);
  const double m = stats.drop.col(0).mean();
  const double sd = std::sqrt(v);
  const double pdf = std::exp(-0.5 * mean_diff * mean_diff / v) / std::sqrt(2.0 * std::numbers::pi);
  const double cdf = 0.5 * std::erfc(-mean_diff / (sd * std::sqrt(2.0)));
  const double expect = mean_diff * cdf + sd * pdf;
  CHECK(std::abs(m - expect) <= 3.0 * sd / std::sqrt(static_cast<double>(so.n_samples)));
}

TEST_CASE("variance bounds across kernel families") {
  const Dataset d = random_dataset(15, 2);
  const std::vector<KernelSpec> kernels = {
      KernelSpec::squared_exponential(1.0, vec({1.5, 0.8})),
      KernelSpec::matern(1.0, vec({1.0, 0.5}), 2),
      KernelSpec::relu_deep(2, 3.19, 0.1, 2),
      KernelSpec::linear(1.0, vec({0.1, 0.1})),
  };
  const Vector xs = vec({0.5, -0.4});
  const Box region = Box::around(xs, 0.2);
  const RowMatrix grid = grid_points(region, 61);
  for (const auto& k : kernels) {
    CAPTURE(family_name(k.family()));
    const auto gp = TrainedGP::fit(k, d, 1e-4);
    double sup_diff = 0.0, sup_var = 0.0;
    for (Index p = 0; p < grid.rows(); ++p) {
      sup_diff = std::max(sup_diff, difference_moments(gp, xs, grid.row(p).transpose()).cov(0, 0));
      sup_var = std::max(sup_var, posterior_var(gp, grid.row(p).transpose()));
    }
    CHECK(variance_sup_bounds(gp, xs, region).upper >= sup_diff - 1e-9);
    CHECK(variance_self_sup(gp, region).upper >= sup_var - 1e-9);
  }
}

TEST_CASE("point regions are exact") {
  const TrainedGP& gp = example_gp();
  const Vector c = vec({1.0, -0.5});
  const Box p = Box::point(c);
  const auto inf = mean_inf_bounds(gp, p, 0);
  CHECK(inf.lower == inf.upper);
  CHECK(inf.lower == posterior_mean(gp, c, 0));
  CHECK(mu_o_sup(gp, c, p, 0) == 0.0);
  const auto xi = variance_sup_bounds(gp, c, p);
  CHECK(xi.upper == 0.0);
  const auto self = variance_self_sup(gp, p);
  CHECK(self.upper == doctest::Approx(posterior_var(gp, c)));
}

TEST_CASE("region budget and progress reporting") {
  const auto gp = TrainedGP::fit(KernelSpec::squared_exponential(1.0, vec({4.0, 4.0})), random_dataset(30, 3), 1e-6);
  const Box region = Box::around(vec({0.0, 0.0}), 1.5);
  BnBConfig cfg;
  cfg.tolerance = 1e-9;
  cfg.max_regions = 25;
  double last_lo = -1e300, last_hi = 1e300;
  bool monotone = true;
  long calls = 0;
  cfg.on_progress = [&](long, double lo, double hi) {
    monotone = monotone && lo >= last_lo - 1e-15 && hi <= last_hi + 1e-15;
    last_lo = lo;
    last_hi = hi;
    ++calls;
  };
  const auto res = mean_inf_bounds(gp, region, 0, cfg);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations <= 26);
  CHECK(monotone);
  CHECK(calls == res.iterations);
  const Matrix mu = omp::posterior_mean_grid(gp, grid_points(region, 101));
  CHECK(res.lower <= mu.col(0).minCoeff());

  BnBConfig bad;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(mean_inf_bounds(gp, region, 0, bad), InputError);
  CHECK_THROWS_AS(mean_inf_bounds(gp, region, 5), InputError);
}

TEST_CASE("lipschitz constants") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SUBCASE("squared exponential closed form") {
    for (double s2 : {0.03, 1.0, 2.5}) {
      const auto k = KernelSpec::squared_exponential(s2, vec({0.3, 1.0}));
      CHECK(lipschitz_bound(k, Box::around(vec({0.0, 0.0}), 1.0)) == std::sqrt(2.0) * std::sqrt(s2));
    }
  }
  const Dataset d = random_dataset(10, 4);
  const std::vector<KernelSpec> kernels = {
      KernelSpec::squared_exponential(1.3, vec({0.5, 3.0})),
      KernelSpec::rational_quadratic(1.0, 0.8, vec({2.0, 0.5})),
      KernelSpec::matern(1.0, vec({1.0, 0.5}), 1),
      KernelSpec::matern(1.0, vec({1.0, 0.5}), 2),
      KernelSpec::periodic(1.0, vec({1.0, 2.0}), vec({1.5, 0.6})),
      KernelSpec::linear(0.6, vec({0.0, 0.0})),
      KernelSpec::relu_deep(3, 3.19, 0.05, 2),
  };
  const Box region(vec({0.5, 0.2}), vec({1.5, 1.0}));
  for (const auto& k : kernels) {
    CAPTURE(family_name(k.family()));
    const double K = lipschitz_bound(k, region);
    REQUIRE(std::isfinite(K));
    const auto gp = TrainedGP::fit(k, d, 1e-4);
    for (int s = 0; s < 2000; ++s) {
      Vector a(2), b(2);
      for (Index j = 0; j < 2; ++j) {
        a[j] = region.lower(j) + region.width(j) * 0.5 * (1.0 + u(rng));
        b[j] = region.lower(j) + region.width(j) * 0.5 * (1.0 + u(rng));
      }
      const double dist = std::sqrt(difference_moments(gp, a, b).cov(0, 0));
      CHECK(dist <= K * (a - b).norm() + 1e-9);
    }
  }
  CHECK(std::isinf(lipschitz_bound(KernelSpec::matern(1.0, vec({1.0, 1.0}), 0), region)));
  CHECK(std::isinf(lipschitz_bound(KernelSpec::relu_deep(1, 1.0, 0.0, 2), Box::around(vec({0.0, 0.0}), 1.0))));
}

TEST_CASE("sup d bound covers sampled pseudo-distances") {
  const TrainedGP& gp = example_gp();
  const Vector xs = vec({3.0, 3.0});
  const Box region = Box::around(xs, 0.1);
  const double bound = sup_d_bound(variance_sup_bounds(gp, xs, region).upper);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int s = 0; s < 2000; ++s) {
    const Vector a = xs + vec({u(rng), u(rng)});
    const Vector b = xs + vec({u(rng), u(rng)});
    CHECK(std::sqrt(difference_moments(gp, a, b).cov(0, 0)) <= bound + 1e-9);
  }
  CHECK(sup_d_bound(0.25) == 1.0);
  CHECK_THROWS_AS(sup_d_bound(-1.0), InputError);
}
