#include "gpcert/sampling.hpp"

#include "gpcert/parallel.hpp"

#include <cmath>
#include <random>

namespace gpcert {

RowMatrix grid_points(const Box& region, int per_dim) {
  require(per_dim >= 1, "grid per_dim must be at least 1");
  const auto free = region.free_dims();
  double count = 1.0;
  for (std::size_t k = 0; k < free.size(); ++k) count *= per_dim;
  require(count <= 1e6, "grid would exceed 10^6 points");
  const Index total = static_cast<Index>(count);
  RowMatrix pts(total, region.dim());
  const Vector centre = region.center();
  for (Index p = 0; p < total; ++p) {
    pts.row(p) = centre.transpose();
    Index rem = p;
    // last free dimension varies fastest
    for (std::size_t k = free.size(); k-- > 0;) {
      const Index j = free[k];
      const Index step = rem % per_dim;
      rem /= per_dim;
      if (per_dim > 1) {
        pts(p, j) = step == per_dim - 1
                        ? region.upper(j)
                        : region.lower(j) + region.width(j) * static_cast<double>(step) / (per_dim - 1);
      }
    }
  }
  return pts;
}

namespace {

constexpr Index kBatch = 64;

struct JointPosterior {
  Matrix chol;   // lower factor of the joint covariance, x_star first
  Matrix mean;   // P x n
  double jitter = 0.0;
};

JointPosterior joint_posterior(const TrainedGP& gp, const Vector& x_star, const RowMatrix& grid) {
  require(grid.cols() == gp.input_dim() && x_star.size() == gp.input_dim(),
          "grid or x_star dimension differs from the GP input dimension");
  std::vector<Index> keep;
  for (Index g = 0; g < grid.rows(); ++g) {
    if (grid.row(g).transpose() != x_star) keep.push_back(g);
  }
  const Index p = static_cast<Index>(keep.size()) + 1;
  RowMatrix pts(p, gp.input_dim());
  pts.row(0) = x_star.transpose();
  for (Index k = 0; k + 1 < p; ++k) pts.row(k + 1) = grid.row(keep[static_cast<std::size_t>(k)]);

  JointPosterior jp;
  jp.mean = omp::posterior_mean_grid(gp, pts);
  Matrix cov = omp::gram(gp.spec(), pts);
  if (gp.size() > 0) {
    Matrix v = omp::kernel_matrix(gp.spec(), gp.data().inputs, pts);
    gp.cholesky().triangularView<Eigen::Lower>().solveInPlace(v);
    cov.noalias() -= v.transpose() * v;
  }
  for (double j = 1e-10; j <= 1.0001e-4; j *= 10.0) {
    Matrix c = cov;
    c.diagonal().array() += j;
    Eigen::LLT<Matrix> llt(c);
    if (llt.info() == Eigen::Success && (Matrix(llt.matrixL()).diagonal().array() > 0.0).all()) {
      jp.chol = llt.matrixL();
      jp.jitter = j;
      return jp;
    }
  }
  throw NumericalError("joint posterior covariance not positive definite even with jitter 1e-4");
}

// Standard normals for one (draw, output) pair, independent of thread layout.
void fill_normals(std::uint64_t seed, Index draw, Index output, Eigen::Ref<Vector> z) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(output)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  for (Index k = 0; k < z.size(); ++k) z[k] = normal(rng);
}

void run_batch(const JointPosterior& jp, const SamplingOptions& opts, Index batch, SupStatistics& out) {
  const Index p = jp.chol.rows();
  const Index n_out = jp.mean.cols();
  const Index first = batch * kBatch;
  const Index count = std::min(kBatch, static_cast<Index>(opts.n_samples) - first);
  Matrix z(p, count);
  Matrix l1 = Matrix::Zero(p, count);
  for (Index i = 0; i < n_out; ++i) {
    for (Index c = 0; c < count; ++c) fill_normals(opts.seed, first + c, i, z.col(c));
    Matrix f = jp.chol.triangularView<Eigen::Lower>() * z;
    f.colwise() += jp.mean.col(i);
    for (Index c = 0; c < count; ++c) {
      double drop = 0.0;  // x_star itself gives zero
      for (Index g = 1; g < p; ++g) {
        const double diff = f(0, c) - f(g, c);
        drop = std::max(drop, diff);
        l1(g, c) += std::abs(diff);
      }
      out.drop(first + c, i) = drop;
    }
  }
  for (Index c = 0; c < count; ++c) out.l1[first + c] = l1.col(c).maxCoeff();
}

SupStatistics prepare(const JointPosterior& jp, const RowMatrix& grid, const SamplingOptions& opts) {
  require(opts.n_samples >= 1, "n_samples must be at least 1");
  SupStatistics s;
  s.drop = Matrix::Zero(opts.n_samples, jp.mean.cols());
  s.l1 = Vector::Zero(opts.n_samples);
  s.seed = opts.seed;
  s.n_grid = grid.rows();
  s.jitter = jp.jitter;
  return s;
}

Index batch_count(const SamplingOptions& opts) { return (opts.n_samples + kBatch - 1) / kBatch; }

}  // namespace

namespace serial {
SupStatistics sample_sup_statistics(const TrainedGP& gp, const Vector& x_star, const RowMatrix& grid,
                                    const SamplingOptions& opts) {
  const JointPosterior jp = joint_posterior(gp, x_star, grid);
  SupStatistics s = prepare(jp, grid, opts);
  for (Index b = 0; b < batch_count(opts); ++b) run_batch(jp, opts, b, s);
  return s;
}
}  // namespace serial

namespace omp {
SupStatistics sample_sup_statistics(const TrainedGP& gp, const Vector& x_star, const RowMatrix& grid,
                                    const SamplingOptions& opts) {
  const JointPosterior jp = joint_posterior(gp, x_star, grid);
  SupStatistics s = prepare(jp, grid, opts);
  const Index batches = batch_count(opts);
#pragma omp parallel for schedule(dynamic, 1)
  for (Index b = 0; b < batches; ++b) run_batch(jp, opts, b, s);
  return s;
}
}  // namespace omp

EmpiricalEstimate empirical_phi(const SupStatistics& stats, double delta, CertificateMode mode, Index component) {
  const Index n = stats.l1.size();
  require(n >= 1, "no samples");
  Index hits = 0;
  if (mode == CertificateMode::Phi1) {
    require(component >= 0 && component < stats.drop.cols(), "output component out of range");
    for (Index s = 0; s < n; ++s) hits += stats.drop(s, component) > delta ? 1 : 0;
  } else {
    for (Index s = 0; s < n; ++s) hits += stats.l1[s] > delta ? 1 : 0;
  }
  EmpiricalEstimate e;
  e.estimate = static_cast<double>(hits) / static_cast<double>(n);
  e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(n));
  e.n_samples = static_cast<int>(n);
  e.n_grid = stats.n_grid;
  e.seed = stats.seed;
  return e;
}

EmpiricalEstimate empirical_phi(const TrainedGP& gp, const Vector& x_star, const RowMatrix& grid, double delta,
                                const SamplingOptions& opts, CertificateMode mode, Index component) {
  return empirical_phi(omp::sample_sup_statistics(gp, x_star, grid, opts), delta, mode, component);
}

}  // namespace gpcert
