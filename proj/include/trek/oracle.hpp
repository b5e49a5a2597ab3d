#pragma once

#include <Eigen/Core>

#include "trek/tensor.hpp"

// Dense reference route. Everything here materializes the block-circulant
// matrix and works on it with Eigen's dense decompositions; the production
// code paths never call into this namespace.
namespace trek::oracle {

// Block circulant: block (r, c) is frontal slice (r - c) mod n3,
// overall size (n1 n3) x (n2 n3).
Eigen::MatrixXd bcirc(const Tensor3& a);

// First block column of bcirc: frontal slices stacked vertically, (n1 n3) x n2.
Eigen::MatrixXd unfold(const Tensor3& a);
Tensor3 fold(const Eigen::MatrixXd& m, Dims3 dims);

// fold(bcirc(a) * unfold(b))
Tensor3 tprod_reference(const Tensor3& a, const Tensor3& b);

struct DenseSvd {
  Eigen::VectorXd sigma;  // descending
  Eigen::MatrixXd u, v;   // thin factors, filled only when requested
};
DenseSvd dense_svd(const Eigen::MatrixXd& m, bool with_factors = false);

double spectral_norm_dense(const Tensor3& a);
double sigma_min_nonzero_dense(const Tensor3& a, double rel_tol = 1e-10);
double lambda_row_dense(const Tensor3& a);
double lambda_col_dense(const Tensor3& a);

// Least-norm least-squares solve against the materialized system.
Tensor3 pinv_apply_dense(const Tensor3& a, const Tensor3& b, double rel_tol = 1e-10);

// Orthonormal basis of {v : m v = 0}; n x q where q = n - rank(m).
Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& m, double rel_tol = 1e-10);

}  // namespace trek::oracle
