#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "trek/tensor.hpp"

namespace trek {

// Relative rank cutoff shared by every spectral rank decision: a singular
// value counts as nonzero when it exceeds rel_tol times the largest singular
// value across all frequency blocks.
struct RankTolerance {
  double rel_tol = 1e-10;
};

// Mode-3 DFT of the frontal slices. Block w is n1 x n2 with
// block[w] = sum_c A_c exp(-2 pi i w c / n3); for real input the blocks
// satisfy block[n3-w] == conj(block[w]) exactly.
struct FrequencyBlocks {
  Dims3 dims;
  std::vector<Eigen::MatrixXcd> blocks;
};

FrequencyBlocks to_frequency(const Tensor3& a);

// Inverse transform. Throws std::domain_error when any reconstructed entry
// has |imaginary part| above imag_tol.
Tensor3 from_frequency(const FrequencyBlocks& f, double imag_tol = 1e-10);

struct ComplexSvd {
  Eigen::VectorXd sigma;   // descending
  Eigen::MatrixXcd u, v;   // thin factors, filled only when requested
};

// One-sided Jacobi on column pairs. Columns whose norm falls below machine
// epsilon times the largest column norm are flushed to exact zeros (their
// direction is pure roundoff and would otherwise churn forever). Throws
// std::runtime_error if a sweep cap of 100 is reached before all
// off-diagonals fall below 1e-14 relative.
ComplexSvd svd_complex(const Eigen::MatrixXcd& m, bool with_factors = false);

// Largest singular value of the block circulant, computed blockwise.
double spectral_norm(const Tensor3& a);

// Smallest block-circulant singular value above the shared cutoff.
double sigma_min_nonzero(const Tensor3& a, RankTolerance tol = {});

// max over horizontal (resp. lateral) slices of
// spectral_norm(slice)^2 / ||slice||_F^2. Always in [1, n3]; equals 1 for
// n3 == 1. Throws std::domain_error on a zero slice.
double lambda_row(const Tensor3& a);
double lambda_col(const Tensor3& a);

// Least-norm least-squares solve, blockwise pseudoinverse in the frequency
// domain with the shared rank cutoff.
Tensor3 pinv_apply(const Tensor3& a, const Tensor3& b, RankTolerance tol = {});

}  // namespace trek
