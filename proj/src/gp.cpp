#include "gpcert/gp.hpp"

#include "gpcert/parallel.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace gpcert {

namespace {

std::atomic<long> g_clamped{0};

Vector resolve_prior_mean(Vector prior_mean, Index n_outputs) {
  if (prior_mean.size() == 0) return Vector::Zero(n_outputs);
  require(prior_mean.size() == n_outputs, "prior mean length differs from the number of outputs");
  return prior_mean;
}

}  // namespace

void Dataset::validate() const {
  require(inputs.rows() >= 1, "dataset is empty");
  require(inputs.cols() >= 1, "dataset has no input columns");
  require(targets.cols() >= 1, "dataset has no target columns");
  require(targets.rows() == inputs.rows(), "dataset inputs and targets have different row counts");
  require(inputs.allFinite() && targets.allFinite(), "dataset contains non-finite values");
}

Dataset Dataset::head(Index count) const {
  require(count >= 1 && count <= size(), "dataset head: row count out of range");
  return {inputs.topRows(count), targets.topRows(count)};
}

TrainedGP TrainedGP::fit(const KernelSpec& spec, Dataset data, double jitter, Vector prior_mean) {
  data.validate();
  require(data.input_dim() == spec.dim(), "dataset input dimension differs from the kernel dimension");
  require(jitter >= 0.0 && std::isfinite(jitter), "jitter must be non-negative");
  TrainedGP gp(spec);
  gp.prior_mean_ = resolve_prior_mean(std::move(prior_mean), data.output_dim());
  gp.jitter_ = jitter;
  const Index n = data.size();

  Matrix g = omp::gram(spec, data.inputs);
  g.diagonal().array() += jitter;
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw NumericalError("Gram matrix not positive definite; increase jitter");
  gp.chol_ = llt.matrixL();
  if (!(gp.chol_.diagonal().array() > 0.0).all()) {
    throw NumericalError("Gram matrix not positive definite; increase jitter");
  }

  Matrix centered = data.targets;
  centered.rowwise() -= gp.prior_mean_.transpose();
  gp.weights_ = llt.solve(centered);
  gp.gram_inverse_ = llt.solve(Matrix::Identity(n, n));
  gp.gram_inverse_ = 0.5 * (gp.gram_inverse_ + gp.gram_inverse_.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(g, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  // Step sizes derived from this must never be too large; fall back to a trace bound.
  gp.gram_inverse_norm_ = lmin > 0.0 ? 1.0 / lmin : gp.gram_inverse_.trace();
  gp.gram_inverse_norm_ = std::max(gp.gram_inverse_norm_, gp.gram_inverse_.diagonal().maxCoeff());
  gp.data_ = std::move(data);
  return gp;
}

TrainedGP TrainedGP::prior_only(const KernelSpec& spec, Index n_outputs, Vector prior_mean) {
  require(n_outputs >= 1, "prior-only GP needs at least one output");
  TrainedGP gp(spec);
  gp.prior_mean_ = resolve_prior_mean(std::move(prior_mean), n_outputs);
  gp.data_.inputs = RowMatrix(0, spec.dim());
  gp.data_.targets = Matrix(0, n_outputs);
  gp.chol_ = Matrix(0, 0);
  gp.weights_ = Matrix(0, n_outputs);
  gp.gram_inverse_ = Matrix(0, 0);
  return gp;
}

TrainedGP TrainedGP::restore(const KernelSpec& spec, Dataset data, double jitter, Vector prior_mean, Matrix cholesky,
                             Matrix weights, Matrix gram_inverse, double gram_inverse_norm) {
  data.validate();
  const Index n = data.size();
  require(data.input_dim() == spec.dim(), "stored dataset dimension differs from the kernel dimension");
  require(cholesky.rows() == n && cholesky.cols() == n, "stored Cholesky factor has the wrong shape");
  require(weights.rows() == n && weights.cols() == data.output_dim(), "stored weights have the wrong shape");
  require(gram_inverse.rows() == n && gram_inverse.cols() == n, "stored Gram inverse has the wrong shape");
  TrainedGP gp(spec);
  gp.prior_mean_ = resolve_prior_mean(std::move(prior_mean), data.output_dim());
  gp.jitter_ = jitter;
  gp.data_ = std::move(data);
  gp.chol_ = std::move(cholesky);
  gp.weights_ = std::move(weights);
  gp.gram_inverse_ = std::move(gram_inverse);
  gp.gram_inverse_norm_ = gram_inverse_norm;
  return gp;
}

Vector TrainedGP::kernel_row(ConstVectorRef x) const {
  require(x.size() == spec_.dim(), "query dimension differs from the kernel dimension");
  Vector r(size());
  for (Index i = 0; i < size(); ++i) r[i] = kernel_eval(spec_, x, data_.inputs.row(i).transpose());
  return r;
}

Vector TrainedGP::whitened_row(ConstVectorRef x) const {
  Vector r = kernel_row(x);
  if (size() > 0) chol_.triangularView<Eigen::Lower>().solveInPlace(r);
  return r;
}

Vector posterior_mean(const TrainedGP& gp, ConstVectorRef x) {
  Vector mu = gp.prior_mean();
  if (gp.size() > 0) mu += gp.weights().transpose() * gp.kernel_row(x);
  return mu;
}

double posterior_mean(const TrainedGP& gp, ConstVectorRef x, Index component) {
  require(component >= 0 && component < gp.output_dim(), "output component out of range");
  double mu = gp.prior_mean()[component];
  if (gp.size() > 0) mu += gp.kernel_row(x).dot(gp.weights().col(component));
  return mu;
}

double posterior_cov(const TrainedGP& gp, ConstVectorRef x1, ConstVectorRef x2) {
  const double prior = kernel_eval(gp.spec(), x1, x2);
  if (gp.size() == 0) return prior;
  return prior - gp.whitened_row(x1).dot(gp.whitened_row(x2));
}

double posterior_var(const TrainedGP& gp, ConstVectorRef x) {
  const double prior = kernel_eval(gp.spec(), x, x);
  if (gp.size() == 0) return prior;
  const double v = prior - gp.whitened_row(x).squaredNorm();
  if (v < 0.0) {
    g_clamped.fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  }
  return v;
}

long clamped_variance_count() { return g_clamped.load(); }

DiffMoments difference_moments(const TrainedGP& gp, ConstVectorRef x_star, ConstVectorRef x) {
  DiffMoments out;
  out.mean = posterior_mean(gp, x_star) - posterior_mean(gp, x);
  double v = kernel_eval(gp.spec(), x_star, x_star) + kernel_eval(gp.spec(), x, x) -
             2.0 * kernel_eval(gp.spec(), x_star, x);
  if (gp.size() > 0) v -= (gp.whitened_row(x_star) - gp.whitened_row(x)).squaredNorm();
  if (v < 0.0) {
    g_clamped.fetch_add(1, std::memory_order_relaxed);
    v = 0.0;
  }
  out.cov = Matrix::Identity(gp.output_dim(), gp.output_dim()) * v;
  return out;
}

double log_marginal_likelihood(const TrainedGP& gp) {
  const Index n = gp.size();
  if (n == 0) return 0.0;
  const double log_det = 2.0 * gp.cholesky().diagonal().array().log().sum();
  double acc = 0.0;
  for (Index i = 0; i < gp.output_dim(); ++i) {
    const Vector centered = gp.data().targets.col(i).array() - gp.prior_mean()[i];
    acc += -0.5 * centered.dot(gp.weights().col(i)) - 0.5 * log_det -
           0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  }
  return acc;
}

GridSearchResult hyper_grid_search(const KernelSpec& spec_template, const Dataset& data, const HyperGrid& grid,
                                   double jitter, Vector prior_mean) {
  for (const auto& [name, values] : grid) require(!values.empty(), "hyperparameter grid '" + name + "' is empty");
  std::vector<std::size_t> idx(grid.size(), 0);
  GridSearchResult best{spec_template, jitter, -std::numeric_limits<double>::infinity(), 0, 0};
  bool found = false;
  std::ostringstream failures;
  while (true) {
    KernelSpec spec = spec_template;
    double j = jitter;
    std::ostringstream label;
    try {
      for (std::size_t a = 0; a < grid.size(); ++a) {
        const double v = grid[a].second[idx[a]];
        label << (a ? ", " : "") << grid[a].first << "=" << v;
        if (grid[a].first == "noise") j = v;
        else spec = spec.with_param(grid[a].first, v);
      }
      const auto gp = TrainedGP::fit(spec, data, j, prior_mean);
      const double ll = log_marginal_likelihood(gp);
      ++best.evaluated;
      if (std::isfinite(ll) && (!found || ll > best.log_likelihood)) {
        best.spec = spec;
        best.jitter = j;
        best.log_likelihood = ll;
        found = true;
      }
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      ++best.failed;
      failures << "\n  " << label.str() << ": " << e.what();
    }
    bool done = true;
    for (std::size_t a = grid.size(); a-- > 0;) {
      if (++idx[a] < grid[a].second.size()) {
        done = false;
        break;
      }
      idx[a] = 0;
    }
    if (done) break;
  }
  if (!found) throw NumericalError("hyperparameter search: every grid point failed" + failures.str());
  return best;
}

}  // namespace gpcert
