#include "doctest.h"

#include "gpcert/dudley.hpp"
#include "gpcert/types.hpp"

#include <cmath>
#include <random>

using namespace gpcert;

namespace {

// Composite Simpson on t in [0, 1] after z = a t^4, which flattens the
// logarithmic blow-up at z = 0 into a smooth integrand.
double simpson_reference(double K, double D, int m, double sup_d, int panels = 1000000) {
  const double a = 0.5 * sup_d;
  auto f = [&](double t) {
    if (t == 0.0) return 0.0;
    const double z = a * t * t * t * t;
    return std::sqrt(m * std::log(std::sqrt(static_cast<double>(m)) * K * D / z + 1.0)) * 4.0 * a * t * t * t;
  };
  const double h = 1.0 / panels;
  double acc = f(0.0) + f(1.0);
  for (int k = 1; k < panels; ++k) acc += f(k * h) * (k % 2 ? 4.0 : 2.0);
  return 12.0 * acc * h / 3.0;
}

}  // namespace

TEST_CASE("adaptive quadrature matches a fine Simpson reference") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> logu(-3.0, 1.0);
  std::uniform_int_distribution<int> mdist(1, 6);
  for (int rep = 0; rep < 8; ++rep) {
    const double K = std::pow(10.0, logu(rng));
    const double D = std::pow(10.0, logu(rng));
    const double sd = std::pow(10.0, logu(rng));
    const int m = mdist(rng);
    CAPTURE(K);
    CAPTURE(D);
    CAPTURE(sd);
    CAPTURE(m);
    const double ref = simpson_reference(K, D, m, sd);
    const double got = dudley_bound(K, D, m, sd);
    CHECK(std::abs(got - ref) <= 1e-6 * ref);
    // the returned value includes its error estimate and tail, so it errs high
    CHECK(got >= ref * (1.0 - 1e-9));
  }
}

TEST_CASE("degenerate arguments") {
  CHECK(dudley_bound(1.0, 1.0, 2, 0.0) == 0.0);
  CHECK(dudley_bound(1.0, 0.0, 2, 0.5) == 0.0);
  CHECK(dudley_bound(1.0, 1.0, 0, 0.5) == 0.0);
  CHECK(dudley_bound(0.0, 1.0, 2, 0.5) == 0.0);
  CHECK(std::isinf(dudley_bound(std::numeric_limits<double>::infinity(), 1.0, 2, 0.5)));
  CHECK_THROWS_AS(dudley_bound(-1.0, 1.0, 2, 0.5), InputError);
  CHECK_THROWS_AS(dudley_bound(1.0, 1.0, 2, 0.5, 0.0), InputError);
}

TEST_CASE("monotone in every argument") {
  const double base = dudley_bound(1.0, 0.2, 2, 0.05);
  CHECK(dudley_bound(2.0, 0.2, 2, 0.05) > base);
  CHECK(dudley_bound(1.0, 0.4, 2, 0.05) > base);
  CHECK(dudley_bound(1.0, 0.2, 3, 0.05) > base);
  CHECK(dudley_bound(1.0, 0.2, 2, 0.10) > base);
}

TEST_CASE("tiny covering ratio stays accurate") {
  // sqrt(m) K D / a << 1: integrand ~ sqrt(m beta) exp(-u / 2) and log1p keeps the digits
  const double K = 1e-6, D = 1e-3, sd = 1.0;
  const double ref = simpson_reference(K, D, 2, sd);
  CHECK(dudley_bound(K, D, 2, sd) == doctest::Approx(ref).epsilon(1e-6));
}
