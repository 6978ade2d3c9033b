#pragma once

#include "gpcert/gp.hpp"

namespace gpcert {

// Two implementations of the dense hot loops. The serial versions are the
// reference the OpenMP versions are tested (bitwise) and benchmarked against.

namespace serial {
/// K(i, j) = Sigma(a_i, b_j).
Matrix kernel_matrix(const KernelSpec& spec, const RowMatrix& a, const RowMatrix& b);
/// Symmetric Gram matrix of the rows of x.
Matrix gram(const KernelSpec& spec, const RowMatrix& x);
/// Posterior mean of every row, one column per output.
Matrix posterior_mean_grid(const TrainedGP& gp, const RowMatrix& points);
/// Clamped posterior variance of every row.
Vector posterior_var_grid(const TrainedGP& gp, const RowMatrix& points);
}  // namespace serial

namespace omp {
Matrix kernel_matrix(const KernelSpec& spec, const RowMatrix& a, const RowMatrix& b);
Matrix gram(const KernelSpec& spec, const RowMatrix& x);
Matrix posterior_mean_grid(const TrainedGP& gp, const RowMatrix& points);
Vector posterior_var_grid(const TrainedGP& gp, const RowMatrix& points);
}  // namespace omp

}  // namespace gpcert
