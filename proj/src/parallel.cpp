#include "gpcert/parallel.hpp"

namespace gpcert {

namespace {

void check_cols(const KernelSpec& spec, const RowMatrix& a) {
  require(a.cols() == spec.dim(), "point matrix column count differs from the kernel dimension");
}

// Per-row work shared by both variants so they agree bitwise.
void mean_row(const TrainedGP& gp, const RowMatrix& points, Index p, Matrix& out) {
  const Vector k = gp.kernel_row(points.row(p).transpose());
  for (Index i = 0; i < gp.output_dim(); ++i) {
    double acc = gp.prior_mean()[i];
    for (Index l = 0; l < k.size(); ++l) acc += k[l] * gp.weights()(l, i);
    out(p, i) = acc;
  }
}

double var_row(const TrainedGP& gp, const RowMatrix& points, Index p) {
  return posterior_var(gp, points.row(p).transpose());
}

}  // namespace

namespace serial {

Matrix kernel_matrix(const KernelSpec& spec, const RowMatrix& a, const RowMatrix& b) {
  check_cols(spec, a);
  check_cols(spec, b);
  Matrix k(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.rows(); ++j) k(i, j) = kernel_eval(spec, a.row(i).transpose(), b.row(j).transpose());
  }
  return k;
}

Matrix gram(const KernelSpec& spec, const RowMatrix& x) {
  check_cols(spec, x);
  const Index n = x.rows();
  Matrix k(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) {
      k(i, j) = kernel_eval(spec, x.row(i).transpose(), x.row(j).transpose());
      k(j, i) = k(i, j);
    }
  }
  return k;
}

Matrix posterior_mean_grid(const TrainedGP& gp, const RowMatrix& points) {
  check_cols(gp.spec(), points);
  Matrix out(points.rows(), gp.output_dim());
  for (Index p = 0; p < points.rows(); ++p) mean_row(gp, points, p, out);
  return out;
}

Vector posterior_var_grid(const TrainedGP& gp, const RowMatrix& points) {
  check_cols(gp.spec(), points);
  Vector out(points.rows());
  for (Index p = 0; p < points.rows(); ++p) out[p] = var_row(gp, points, p);
  return out;
}

}  // namespace serial

namespace omp {

Matrix kernel_matrix(const KernelSpec& spec, const RowMatrix& a, const RowMatrix& b) {
  check_cols(spec, a);
  check_cols(spec, b);
  Matrix k(a.rows(), b.rows());
  const Index rows = a.rows();
  const Index cols = b.rows();
#pragma omp parallel for collapse(2) schedule(static)
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) k(i, j) = kernel_eval(spec, a.row(i).transpose(), b.row(j).transpose());
  }
  return k;
}

Matrix gram(const KernelSpec& spec, const RowMatrix& x) {
  check_cols(spec, x);
  const Index n = x.rows();
  Matrix k(n, n);
#pragma omp parallel for schedule(dynamic, 8)
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) {
      k(i, j) = kernel_eval(spec, x.row(i).transpose(), x.row(j).transpose());
      k(j, i) = k(i, j);
    }
  }
  return k;
}

Matrix posterior_mean_grid(const TrainedGP& gp, const RowMatrix& points) {
  check_cols(gp.spec(), points);
  Matrix out(points.rows(), gp.output_dim());
  const Index n = points.rows();
#pragma omp parallel for schedule(static)
  for (Index p = 0; p < n; ++p) mean_row(gp, points, p, out);
  return out;
}

Vector posterior_var_grid(const TrainedGP& gp, const RowMatrix& points) {
  check_cols(gp.spec(), points);
  Vector out(points.rows());
  const Index n = points.rows();
#pragma omp parallel for schedule(static)
  for (Index p = 0; p < n; ++p) out[p] = var_row(gp, points, p);
  return out;
}

}  // namespace omp

}  // namespace gpcert
