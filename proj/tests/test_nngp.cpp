#include "doctest.h"

#include "gpcert/io.hpp"
#include "gpcert/nngp.hpp"
#include "gpcert/sampling.hpp"

#include <random>

using namespace gpcert;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

LoadedData mnist(const std::string& file) {
  DataSource s;
  s.path = std::string(GPCERT_DATA_DIR) + "/" + file;
  s.label = "label";
  s.n_classes = 10;
  s.normalize = true;
  return load_dataset(s);
}

}  // namespace

TEST_CASE("normalisation and one-hot coding") {
  CHECK(unit_normalize(vec({3.0, 4.0}))[1] == doctest::Approx(0.8));
  CHECK_THROWS_AS(unit_normalize(vec({0.0, 0.0})), InputError);
  RowMatrix r(2, 2);
  r << 1.0, 0.0, 0.0, 0.0;
  CHECK_THROWS_AS(unit_normalize_rows(r), InputError);
  const Matrix y = one_hot_targets({2, 0}, 3, 0.9, -0.1);
  CHECK(y(0, 2) == 0.9);
  CHECK(y(0, 0) == -0.1);
  CHECK(y(1, 0) == 0.9);
  CHECK_THROWS_AS(one_hot_targets({3}, 3), InputError);
}

TEST_CASE("classification basics") {
  const auto k = KernelSpec::relu_deep(2, 3.19, 0.0, 3);
  Dataset d{RowMatrix(3, 3), one_hot_targets({0, 1, 2}, 3)};
  d.inputs << 1, 0, 0, 0, 1, 0, 0, 0, 1;
  const auto gp = TrainedGP::fit(k, d, 1e-10);
  for (Index i = 0; i < 3; ++i) {
    const auto c = classify(gp, d.inputs.row(i).transpose());
    CHECK(c.predicted == i);
    CHECK(c.margin > 0.0);
  }
  const auto prior = TrainedGP::prior_only(k, 3);
  const auto tie = classify(prior, vec({0.3, 0.3, 0.3}));
  CHECK(tie.predicted == 0);
  CHECK(tie.margin == 0.0);
}

TEST_CASE("held-out accuracy on the MNIST subset") {
  const auto train = mnist("mnist_train_100.csv");
  const auto test = mnist("mnist_test_500.csv");
  REQUIRE(train.data.size() == 100);
  REQUIRE(test.data.size() == 500);
  const auto k = KernelSpec::relu_deep(2, 3.19, 0.0, train.data.input_dim());
  const auto gp = TrainedGP::fit(k, train.data, 1e-6);
  int correct = 0;
  for (Index i = 0; i < test.data.size(); ++i)
    correct += classify(gp, test.data.inputs.row(i).transpose()).predicted == test.labels[static_cast<std::size_t>(i)];
  CHECK(correct / 500.0 >= 0.70);
}

TEST_CASE("feature boxes") {
  const Vector x = vec({0.1, 0.5, 0.95});
  FeatureMask m{"m", {0, 2}, 0.2};
  const Box b = feature_box(x, m);
  CHECK(b.lower(0) == doctest::Approx(-0.1));
  CHECK(b.width(1) == 0.0);
  CHECK(b.upper(2) == doctest::Approx(1.15));
  const Box c = feature_box(x, m, Interval{0.0, 1.0});
  CHECK(c.lower(0) == 0.0);
  CHECK(c.upper(2) == 1.0);
  // x outside the clip range stays inside its box
  const Box outside = feature_box(vec({1.5, 0.5, 0.5}), m, Interval{0.0, 1.0});
  CHECK(outside.contains(vec({1.5, 0.5, 0.5})));
  CHECK_THROWS_AS(feature_box(x, FeatureMask{"bad", {3}, 0.1}), InputError);
  CHECK_THROWS_AS(feature_box(x, FeatureMask{"bad", {2, 0}, 0.1}), InputError);
  CHECK_THROWS_AS(feature_box(x, FeatureMask{"bad", {}, 0.1}), InputError);
  CHECK_THROWS_AS(feature_box(x, FeatureMask{"bad", {0}, -0.1}), InputError);
}

TEST_CASE("normalised variance") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset d{RowMatrix(8, 4), Matrix(8, 1)};
  for (Index i = 0; i < 8; ++i) {
    for (Index j = 0; j < 4; ++j) d.inputs(i, j) = u(rng);
    d.targets(i, 0) = u(rng);
  }
  d.inputs = unit_normalize_rows(d.inputs);
  const auto gp = TrainedGP::fit(KernelSpec::relu_deep(2, 3.19, 0.0, 4), d, 1e-6);
  const Vector x = unit_normalize(vec({0.3, 0.6, 0.2, 0.5}));
  const FeatureMask mask{"pair", {1, 3}, 0.15};
  const double ratio = normalized_variance_sup(gp, x, mask);
  CHECK(ratio >= 1.0);
  const RowMatrix grid = grid_points(feature_box(x, mask), 41);
  double grid_max = 0.0;
  for (Index p = 0; p < grid.rows(); ++p) grid_max = std::max(grid_max, posterior_var(gp, grid.row(p).transpose()));
  CHECK(ratio >= grid_max / posterior_var(gp, x) - 1e-9);
  CHECK(normalized_variance_sup(gp, x, FeatureMask{"zero", {1}, 0.0}) == 1.0);
}

TEST_CASE("depth and width sweep") {
  const auto train = mnist("mnist_train_100.csv");
  const auto test = mnist("mnist_test_500.csv");
  DepthWidthSweep s;
  s.train = train.data;
  s.points = test.data.inputs.topRows(2);
  s.sizes = {50, 100};
  s.layers = {1, 2};
  s.mask = FeatureMask{"centre", {300, 301, 302, 328, 329, 330}, 0.15};
  const auto cells = depth_width_sweep(s);
  REQUIRE(cells.size() == 8);
  CHECK(cells[0].layers == 1);
  CHECK(cells[0].n_train == 50);
  CHECK(cells[1].point_id == 1);
  CHECK(cells[7].layers == 2);
  CHECK(cells[7].n_train == 100);
  for (const auto& c : cells) {
    CHECK(c.error.empty());
    CHECK(c.sigma_bar_sq >= 1.0);
  }
  // one cell equals the direct call
  const auto gp = TrainedGP::fit(KernelSpec::relu_deep(2, 3.19, 0.0, 784), train.data.head(100), 1e-6);
  CHECK(cells[6].sigma_bar_sq == normalized_variance_sup(gp, s.points.row(0).transpose(), s.mask));

  s.sizes = {500};
  const auto failed = depth_width_sweep(s);
  CHECK(std::isnan(failed[0].sigma_bar_sq));
  CHECK_FALSE(failed[0].error.empty());
}
