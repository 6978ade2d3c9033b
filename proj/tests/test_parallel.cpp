#include "doctest.h"

#include "gpcert/parallel.hpp"

#include <omp.h>

#include <random>

using namespace gpcert;

namespace {

RowMatrix random_points(Index n, Index m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  RowMatrix x(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) x(i, j) = u(rng);
  return x;
}

}  // namespace

TEST_CASE("serial and OpenMP kernels agree bitwise") {
  const RowMatrix a = random_points(70, 3, 1);
  const RowMatrix b = random_points(45, 3, 2);
  const std::vector<KernelSpec> kernels = {
      KernelSpec::squared_exponential(1.0, Vector::Constant(3, 0.7)),
      KernelSpec::relu_deep(3, 3.19, 0.1, 3),
      KernelSpec::matern(1.0, Vector::Constant(3, 0.5), 2),
      KernelSpec::periodic(1.0, Vector::Constant(3, 0.5), Vector::Constant(3, 1.3)),
  };
  for (int threads : {1, 3, 8}) {
    omp_set_num_threads(threads);
    for (const auto& k : kernels) {
      CAPTURE(family_name(k.family()));
      CHECK(serial::kernel_matrix(k, a, b) == omp::kernel_matrix(k, a, b));
      const Matrix g = serial::gram(k, a);
      CHECK(g == omp::gram(k, a));
      CHECK(g == g.transpose());
      CHECK(g(4, 9) == kernel_eval(k, a.row(4).transpose(), a.row(9).transpose()));
    }
  }
}

TEST_CASE("posterior grids agree bitwise and match the pointwise API") {
  const RowMatrix x = random_points(40, 2, 3);
  Dataset d{x, Matrix(40, 2)};
  for (Index i = 0; i < 40; ++i) {
    d.targets(i, 0) = std::sin(x(i, 0));
    d.targets(i, 1) = x(i, 0) * x(i, 1);
  }
  const auto gp = TrainedGP::fit(KernelSpec::squared_exponential(1.0, Vector::Constant(2, 0.5)), d, 1e-6);
  const RowMatrix q = random_points(300, 2, 4);
  omp_set_num_threads(4);
  const Matrix ms = serial::posterior_mean_grid(gp, q);
  CHECK(ms == omp::posterior_mean_grid(gp, q));
  const Vector vs = serial::posterior_var_grid(gp, q);
  CHECK(vs == omp::posterior_var_grid(gp, q));
  for (Index p : {0, 17, 299}) {
    CHECK(ms(p, 1) == doctest::Approx(posterior_mean(gp, q.row(p).transpose(), 1)).epsilon(1e-12));
    CHECK(vs[p] == posterior_var(gp, q.row(p).transpose()));
  }
  CHECK_THROWS_AS(omp::posterior_mean_grid(gp, random_points(3, 5, 1)), InputError);
  CHECK_THROWS_AS(serial::gram(gp.spec(), random_points(3, 5, 1)), InputError);
}
