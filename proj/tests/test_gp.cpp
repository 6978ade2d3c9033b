#include "doctest.h"

#include "gpcert/datasets.hpp"
#include "gpcert/gp.hpp"

#include <cmath>
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

Dataset random_dataset(int n, int m, int outputs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Dataset d{RowMatrix(n, m), Matrix(n, outputs)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) d.inputs(i, j) = u(rng);
    for (int o = 0; o < outputs; ++o) d.targets(i, o) = std::sin(d.inputs(i, 0) + o) + 0.1 * u(rng);
  }
  return d;
}

// Textbook posterior with an explicit LU inverse instead of a Cholesky solve.
struct DenseOracle {
  Matrix kinv;
  const Dataset* data;
  const KernelSpec* spec;

  DenseOracle(const KernelSpec& k, const Dataset& d, double jitter) : data(&d), spec(&k) {
    const Index n = d.size();
    Matrix g(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) g(i, j) = kernel_eval(k, d.inputs.row(i).transpose(), d.inputs.row(j).transpose());
    g.diagonal().array() += jitter;
    kinv = g.fullPivLu().inverse();
  }
  Vector row(const Vector& x) const {
    Vector r(data->size());
    for (Index i = 0; i < data->size(); ++i) r[i] = kernel_eval(*spec, x, data->inputs.row(i).transpose());
    return r;
  }
  double mean(const Vector& x, Index o) const { return row(x).dot(kinv * data->targets.col(o)); }
  double cov(const Vector& a, const Vector& b) const { return kernel_eval(*spec, a, b) - row(a).dot(kinv * row(b)); }
};

}  // namespace

TEST_CASE("posterior agrees with a dense-inverse oracle") {
  const Dataset d = random_dataset(25, 2, 2, 1);
  const auto k = KernelSpec::squared_exponential(1.5, vec({0.8, 1.3}));
  const auto gp = TrainedGP::fit(k, d, 1e-4);
  const DenseOracle oracle(k, d, 1e-4);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector a = vec({u(rng), u(rng)});
    const Vector b = vec({u(rng), u(rng)});
    const Vector mu = posterior_mean(gp, a);
    CHECK(mu[0] == doctest::Approx(oracle.mean(a, 0)).epsilon(1e-8));
    CHECK(mu[1] == doctest::Approx(oracle.mean(a, 1)).epsilon(1e-8));
    CHECK(posterior_mean(gp, a, 1) == doctest::Approx(mu[1]).epsilon(1e-14));
    CHECK(posterior_cov(gp, a, b) == doctest::Approx(oracle.cov(a, b)).epsilon(1e-8).scale(1e-6));
    CHECK(posterior_var(gp, a) == doctest::Approx(std::max(0.0, oracle.cov(a, a))).epsilon(1e-8).scale(1e-6));
    const DiffMoments dm = difference_moments(gp, a, b);
    CHECK(dm.mean[0] == doctest::Approx(oracle.mean(a, 0) - oracle.mean(b, 0)).epsilon(1e-8).scale(1e-6));
    const double dvar = oracle.cov(a, a) + oracle.cov(b, b) - 2.0 * oracle.cov(a, b);
    CHECK(dm.cov(0, 0) == doctest::Approx(dvar).epsilon(1e-7).scale(1e-6));
    CHECK(dm.cov(1, 1) == dm.cov(0, 0));
    CHECK(dm.cov(0, 1) == 0.0);
  }
}

TEST_CASE("interpolation as jitter vanishes") {
  const Dataset d = random_dataset(10, 2, 1, 3);
  const auto gp = TrainedGP::fit(KernelSpec::squared_exponential(1.0, vec({1.0, 1.0})), d, 1e-10);
  for (Index i = 0; i < d.size(); ++i) {
    const Vector x = d.inputs.row(i).transpose();
    CHECK(posterior_mean(gp, x, 0) == doctest::Approx(d.targets(i, 0)).epsilon(1e-5));
    CHECK(posterior_var(gp, x) < 1e-6);
  }
}

TEST_CASE("prior mean and prior-only GP") {
  const auto k = KernelSpec::squared_exponential(2.0, vec({1.0}));
  const auto prior = TrainedGP::prior_only(k, 2, vec({0.5, -1.0}));
  CHECK(posterior_mean(prior, vec({3.0}))[1] == -1.0);
  CHECK(posterior_var(prior, vec({3.0})) == 2.0);
  CHECK(log_marginal_likelihood(prior) == 0.0);

  Dataset far{RowMatrix::Constant(1, 1, 100.0), Matrix::Constant(1, 1, 7.0)};
  const auto gp = TrainedGP::fit(k, far, 1e-6, vec({0.5}));
  CHECK(posterior_mean(gp, vec({0.0}), 0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(TrainedGP::fit(k, far, 1e-6, vec({0.5, 1.0})), InputError);
}

TEST_CASE("log marginal likelihood against the dense formula") {
  const Dataset d = random_dataset(15, 2, 2, 4);
  const auto k = KernelSpec::matern(0.7, vec({0.5, 2.0}), 1);
  const auto gp = TrainedGP::fit(k, d, 1e-3);
  const Index n = d.size();
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = kernel_eval(k, d.inputs.row(i).transpose(), d.inputs.row(j).transpose());
  g.diagonal().array() += 1e-3;
  const auto lu = g.fullPivLu();
  const double logdet = std::log(lu.determinant());
  double expect = 0.0;
  for (Index o = 0; o < 2; ++o) {
    const Vector y = d.targets.col(o);
    expect += -0.5 * y.dot(lu.solve(y)) - 0.5 * logdet - 0.5 * n * std::log(2.0 * std::numbers::pi);
  }
  CHECK(log_marginal_likelihood(gp) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("hyper grid search picks the best grid point") {
  const Dataset d = random_dataset(20, 2, 1, 5);
  const HyperGrid grid{{"sigma2", {0.3, 1.0, 3.0}}, {"theta", {0.1, 1.0}}, {"noise", {1e-4, 1e-2}}};
  const auto base = KernelSpec::squared_exponential(1.0, vec({1.0, 1.0}));
  const auto best = hyper_grid_search(base, d, grid);
  CHECK(best.evaluated == 12);
  CHECK(best.failed == 0);
  double brute = -1e300;
  for (double s : {0.3, 1.0, 3.0})
    for (double t : {0.1, 1.0})
      for (double nz : {1e-4, 1e-2}) {
        const auto gp = TrainedGP::fit(base.with_param("sigma2", s).with_param("theta", t), d, nz);
        brute = std::max(brute, log_marginal_likelihood(gp));
      }
  CHECK(best.log_likelihood == doctest::Approx(brute).epsilon(1e-12));
  CHECK_THROWS_AS(hyper_grid_search(base, d, {{"sigma2", {}}}), InputError);
  CHECK_THROWS_AS(hyper_grid_search(base, d, {{"nonsense", {1.0}}}), InputError);
}

TEST_CASE("fit failures") {
  Dataset dup{RowMatrix::Zero(2, 1), Matrix::Zero(2, 1)};
  const auto k = KernelSpec::squared_exponential(1.0, vec({1.0}));
  CHECK_THROWS_AS(TrainedGP::fit(k, dup, 0.0), NumericalError);
  CHECK_NOTHROW(TrainedGP::fit(k, dup, 1e-6));
  Dataset bad{RowMatrix::Zero(2, 1), Matrix::Zero(3, 1)};
  CHECK_THROWS_AS(TrainedGP::fit(k, bad), InputError);
  Dataset nan{RowMatrix::Constant(1, 1, std::nan("")), Matrix::Zero(1, 1)};
  CHECK_THROWS_AS(TrainedGP::fit(k, nan), InputError);
  CHECK_THROWS_AS(TrainedGP::fit(k, dup, -1.0), InputError);
}

TEST_CASE("saddle dataset") {
  const Dataset d = make_saddle_dataset();
  CHECK(d.size() == 128);
  CHECK(d.input_dim() == 2);
  CHECK(d.output_dim() == 1);
  const Dataset again = make_saddle_dataset();
  CHECK(d.inputs == again.inputs);
  CHECK(d.targets == again.targets);
  SaddleDatasetOptions o;
  o.noise = 0.0;
  const Dataset clean = make_saddle_dataset(o);
  for (Index i = 0; i < clean.size(); ++i)
    CHECK(clean.targets(i, 0) == doctest::Approx(o.scale * clean.inputs(i, 0) * clean.inputs(i, 1)));
  const auto gp = TrainedGP::fit(KernelSpec::squared_exponential(1.0, vec({1.0, 1.0})), d, 1e-6);
  CHECK(std::isfinite(log_marginal_likelihood(gp)));
}

TEST_CASE("restore reproduces the fitted posterior") {
  const Dataset d = random_dataset(12, 2, 1, 6);
  const auto k = KernelSpec::squared_exponential(1.0, vec({1.0, 1.0}));
  const auto gp = TrainedGP::fit(k, d, 1e-5);
  const auto back = TrainedGP::restore(k, gp.data(), gp.jitter(), gp.prior_mean(), gp.cholesky(), gp.weights(),
                                       gp.gram_inverse(), gp.gram_inverse_norm());
  const Vector x = vec({0.2, 0.9});
  CHECK(posterior_mean(back, x, 0) == posterior_mean(gp, x, 0));
  CHECK(posterior_var(back, x) == posterior_var(gp, x));
  CHECK_THROWS_AS(TrainedGP::restore(k, gp.data(), 1e-5, {}, Matrix::Zero(3, 3), gp.weights(), gp.gram_inverse(), 1.0),
                  InputError);
  // gram_inverse_norm dominates the spectrum of the inverse
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gp.gram_inverse());
  CHECK(gp.gram_inverse_norm() >= eig.eigenvalues().maxCoeff() * (1.0 - 1e-12));
}
