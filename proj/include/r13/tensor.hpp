#pragma once
// Symmetric trace-free tensors of rank 0..3 in orthonormal coordinates,
// with the x-direction operators needed for 1D reductions.
#include <Eigen/Dense>

namespace r13::stf {

using Eigen::MatrixXd;
using Eigen::VectorXd;

int dim(int rank); // 1, 3, 5, 7

// columns: orthonormal stf basis tensors flattened (3^rank rows, row-major index)
const MatrixXd& basis(int rank);

// stf projection of a flattened full tensor
VectorXd project(const VectorXd& full, int rank);

// coordinates of stf(T (x) e_dir) for each basis tensor T of rank l: dim(l+1) x dim(l)
MatrixXd gradOp(int rank, int dir);
// contraction of the last index with e_dir: dim(l-1) x dim(l)
MatrixXd divOp(int rank, int dir);

// coordinates of a flattened (already stf) tensor
VectorXd coords(const VectorXd& full, int rank);
VectorXd fullTensor(const VectorXd& coords, int rank);

} // namespace r13::stf
