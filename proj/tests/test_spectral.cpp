#include <doctest.h>

#include <cmath>
#include <complex>

#include "trek/oracle.hpp"
#include "trek/rng.hpp"
#include "trek/spectral.hpp"
#include "trek/tensor.hpp"

using namespace trek;

namespace {

double rel(double got, double want) {
  return std::abs(got - want) / std::max({1.0, std::abs(got), std::abs(want)});
}

Eigen::MatrixXcd random_complex(int rows, int cols, Rng& rng) {
  Eigen::MatrixXcd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i)
      m(i, j) = std::complex<double>(rng.next_gaussian(), rng.next_gaussian());
  return m;
}

}  // namespace

TEST_CASE("identity tensor transforms to identity blocks") {
  const FrequencyBlocks f = to_frequency(Tensor3::identity(3, 4));
  for (const auto& b : f.blocks) {
    CHECK((b - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("frequency transform round trips") {
  Rng rng(1);
  for (int n3 : {1, 2, 3, 6, 7, 8}) {
    const Tensor3 a = gaussian_tensor({5, 4, n3}, rng);
    const Tensor3 back = from_frequency(to_frequency(a));
    CHECK(frobenius_norm(sub(back, a)) / frobenius_norm(a) < 1e-13);
  }
}

TEST_CASE("blocks of a real tensor are exactly conjugate-symmetric") {
  Rng rng(2);
  for (int n3 : {2, 4, 5, 9}) {
    const Tensor3 a = gaussian_tensor({3, 4, n3}, rng);
    const FrequencyBlocks f = to_frequency(a);
    for (int om = 1; om < n3; ++om) {
      const Eigen::MatrixXcd want = f.blocks[static_cast<std::size_t>(n3 - om)].conjugate();
      const auto& got = f.blocks[static_cast<std::size_t>(om)];
      CHECK((got - want).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(f.blocks[0].imag().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("asymmetric blocks are rejected on the way back") {
  Rng rng(3);
  const Tensor3 a = gaussian_tensor({2, 2, 3}, rng);
  FrequencyBlocks f = to_frequency(a);
  f.blocks[1](0, 0) += std::complex<double>(0.0, 0.5);
  CHECK_THROWS_AS((void)from_frequency(f), std::domain_error);
}

TEST_CASE("frequency diagonalization matches the circulant product") {
  Rng rng(4);
  const Tensor3 a = gaussian_tensor({3, 4, 5}, rng);
  const Tensor3 b = gaussian_tensor({4, 2, 5}, rng);
  const FrequencyBlocks fa = to_frequency(a);
  const FrequencyBlocks fb = to_frequency(b);
  FrequencyBlocks fc;
  fc.dims = {3, 2, 5};
  for (int om = 0; om < 5; ++om) {
    fc.blocks.push_back(fa.blocks[static_cast<std::size_t>(om)] *
                        fb.blocks[static_cast<std::size_t>(om)]);
  }
  const Tensor3 got = from_frequency(fc);
  const Tensor3 want = tprod(a, b);
  CHECK(frobenius_norm(sub(got, want)) / frobenius_norm(want) < 1e-12);
}

TEST_CASE("complex svd on hand-checkable matrices") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const ComplexSvd svd = svd_complex(d);
  CHECK(svd.sigma(0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(svd.sigma(1) == doctest::Approx(1.0).epsilon(1e-14));

  Eigen::MatrixXcd row(1, 3);
  row << std::complex<double>(1, 1), std::complex<double>(0, 2), 2.0;
  const ComplexSvd rsvd = svd_complex(row);
  CHECK(rsvd.sigma(0) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
}

TEST_CASE("complex svd reconstructs and matches a real embedding oracle") {
  Rng rng(5);
  for (auto [rows, cols] : {std::pair{5, 3}, {3, 5}, {4, 4}, {1, 4}, {6, 1}}) {
    const Eigen::MatrixXcd m = random_complex(rows, cols, rng);
    const ComplexSvd svd = svd_complex(m, true);

    const Eigen::MatrixXcd rebuilt =
        svd.u * svd.sigma.cast<std::complex<double>>().asDiagonal() * svd.v.adjoint();
    CHECK((rebuilt - m).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, svd.sigma(0)));

    CHECK((svd.u.adjoint() * svd.u -
           Eigen::MatrixXcd::Identity(svd.u.cols(), svd.u.cols()))
              .cwiseAbs().maxCoeff() < 1e-12);
    CHECK((svd.v.adjoint() * svd.v -
           Eigen::MatrixXcd::Identity(svd.v.cols(), svd.v.cols()))
              .cwiseAbs().maxCoeff() < 1e-12);

    // real 2n x 2n embedding [re, -im; im, re] has each sigma twice
    Eigen::MatrixXd emb(2 * rows, 2 * cols);
    emb << m.real(), -m.imag(), m.imag(), m.real();
    const Eigen::VectorXd es = oracle::dense_svd(emb).sigma;
    for (Eigen::Index i = 0; i < svd.sigma.size(); ++i) {
      CHECK(rel(svd.sigma(i), es(2 * i)) < 1e-10);
    }
  }
}

TEST_CASE("complex svd handles duplicated and zero columns") {
  Rng rng(6);
  Eigen::MatrixXcd m = random_complex(5, 3, rng);
  m.col(2) = m.col(0);
  const ComplexSvd svd = svd_complex(m, true);
  CHECK(svd.sigma(2) < 1e-12 * svd.sigma(0));
  const Eigen::MatrixXcd rebuilt =
      svd.u * svd.sigma.cast<std::complex<double>>().asDiagonal() * svd.v.adjoint();
  CHECK((rebuilt - m).cwiseAbs().maxCoeff() < 1e-12 * svd.sigma(0));

  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(3, 2);
  const ComplexSvd zsvd = svd_complex(z);
  CHECK(zsvd.sigma.maxCoeff() == 0.0);
}

TEST_CASE("spectral norm agrees with the dense route") {
  CHECK(spectral_norm(Tensor3::identity(4, 3)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(spectral_norm(Tensor3::zeros({2, 3, 4})) == 0.0);
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Rng sub_rng = Rng::substream(7, static_cast<std::uint64_t>(trial));
    const int n1 = 1 + static_cast<int>(sub_rng.next_uniform() * 6.0);
    const int n2 = 1 + static_cast<int>(sub_rng.next_uniform() * 6.0);
    const int n3 = 1 + static_cast<int>(sub_rng.next_uniform() * 6.0);
    const Tensor3 a = gaussian_tensor({n1, n2, n3}, sub_rng);
    CHECK(rel(spectral_norm(a), oracle::spectral_norm_dense(a)) < 1e-10);
    CHECK(rel(spectral_norm(a), spectral_norm(transpose(a))) < 1e-10);
  }
}

TEST_CASE("product norm is bounded by spectral norm times frobenius norm") {
  for (int trial = 0; trial < 30; ++trial) {
    Rng rng = Rng::substream(8, static_cast<std::uint64_t>(trial));
    const Tensor3 a = gaussian_tensor({4, 3, 4}, rng);
    const Tensor3 b = gaussian_tensor({3, 2, 4}, rng);
    CHECK(frobenius_norm(tprod(a, b)) <=
          spectral_norm(a) * frobenius_norm(b) * (1.0 + 1e-12));
  }
}

TEST_CASE("smallest nonzero singular value, full rank and deficient") {
  CHECK(sigma_min_nonzero(Tensor3::identity(3, 2)) == doctest::Approx(1.0).epsilon(1e-13));
  Rng rng(9);
  const Tensor3 a = gaussian_tensor({6, 3, 4}, rng);
  CHECK(rel(sigma_min_nonzero(a), oracle::sigma_min_nonzero_dense(a)) < 1e-8);

  Tensor3 d = gaussian_tensor({5, 4, 3}, rng);
  embed_horizontal(d, 0, horizontal_slice(d, 4));
  embed_horizontal(d, 1, horizontal_slice(d, 3));
  CHECK(rel(sigma_min_nonzero(d), oracle::sigma_min_nonzero_dense(d)) < 1e-8);

  CHECK_THROWS_AS((void)sigma_min_nonzero(Tensor3::zeros({2, 2, 2})), std::domain_error);
  CHECK_THROWS_AS((void)sigma_min_nonzero(a, {-1.0}), std::invalid_argument);
}

TEST_CASE("slice spectral ratios match the dense route and obey the bounds") {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    Rng sub_rng = Rng::substream(10, static_cast<std::uint64_t>(trial));
    const int n3 = 1 + static_cast<int>(sub_rng.next_uniform() * 6.0);
    const Tensor3 a = gaussian_tensor({5, 4, n3}, sub_rng);
    const double lr = lambda_row(a);
    const double lc = lambda_col(a);
    CHECK(rel(lr, oracle::lambda_row_dense(a)) < 1e-10);
    CHECK(rel(lc, oracle::lambda_col_dense(a)) < 1e-10);
    CHECK(lr >= 1.0 - 1e-12);
    CHECK(lr <= n3 + 1e-12);
    CHECK(lc >= 1.0 - 1e-12);
    CHECK(lc <= n3 + 1e-12);
    if (n3 == 1) {
      CHECK(lr == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(lc == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  CHECK(lambda_row(Tensor3::identity(4, 3)) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("a rank-one tube slice attains the upper slice ratio") {
  // slice with every frontal entry equal: circulant is the all-ones matrix,
  // spectral norm n3, frobenius norm sqrt(n3)
  Tensor3 a(1, 1, 4);
  for (int c = 0; c < 4; ++c) a(0, 0, c) = 1.0;
  CHECK(lambda_row(a) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("zero slices are reported with their index") {
  Tensor3 a(3, 2, 2);
  a(0, 0, 0) = 1.0; a(0, 1, 1) = 2.0; a(2, 0, 0) = 3.0; a(2, 1, 0) = 1.0;
  // horizontal slice 1 is zero
  CHECK_THROWS_WITH_AS((void)lambda_row(a), doctest::Contains("index 1"),
                       std::domain_error);
}

TEST_CASE("least-norm solve agrees with the dense pseudoinverse") {
  Rng rng(11);

  const Tensor3 e = Tensor3::identity(3, 2);
  const Tensor3 b0 = gaussian_tensor({3, 2, 2}, rng);
  CHECK(frobenius_norm(sub(pinv_apply(e, b0), b0)) < 1e-13);

  for (int trial = 0; trial < 15; ++trial) {
    Rng sub_rng = Rng::substream(11, static_cast<std::uint64_t>(trial));
    const int n1 = 2 + static_cast<int>(sub_rng.next_uniform() * 6.0);
    const int n2 = 1 + static_cast<int>(sub_rng.next_uniform() * 6.0);
    const int n3 = 1 + static_cast<int>(sub_rng.next_uniform() * 5.0);
    const int k = 1 + static_cast<int>(sub_rng.next_uniform() * 4.0);
    Tensor3 a = gaussian_tensor({n1, n2, n3}, sub_rng);
    if (trial % 3 == 0 && n1 >= 2) {
      embed_horizontal(a, 0, horizontal_slice(a, n1 - 1));
    }
    const Tensor3 b = gaussian_tensor({n1, k, n3}, sub_rng);
    const Tensor3 got = pinv_apply(a, b);
    const Tensor3 want = oracle::pinv_apply_dense(a, b);
    CHECK(frobenius_norm(sub(got, want)) / std::max(1.0, frobenius_norm(want)) < 1e-8);
    // normal equations
    const Tensor3 resid = tprod(transpose(a), sub(tprod(a, got), b));
    CHECK(frobenius_norm(resid) /
              std::max(1.0, frobenius_norm(a) * frobenius_norm(b)) < 1e-8);
  }
}

TEST_CASE("consistent systems are solved exactly") {
  Rng rng(12);
  const Tensor3 a = gaussian_tensor({6, 3, 4}, rng);
  const Tensor3 x = gaussian_tensor({3, 2, 4}, rng);
  const Tensor3 b = tprod(a, x);
  const Tensor3 got = pinv_apply(a, b);
  CHECK(frobenius_norm(sub(got, x)) / frobenius_norm(x) < 1e-10);
}

TEST_CASE("range membership lower bound on the adjoint product") {
  // for x = A^T w, ||A^T A x'|| style bound: ||A^T x||_F >= sigma_min ||x||_F
  // whenever x lies in the range of the adjoint circulant
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng = Rng::substream(14, static_cast<std::uint64_t>(trial));
    const Tensor3 a = gaussian_tensor({4, 3, 3}, rng);
    const Tensor3 w = gaussian_tensor({4, 2, 3}, rng);
    const Tensor3 x = tprod(transpose(a), w);  // in the range of A^T
    const double smin = sigma_min_nonzero(a);
    const double lhs = frobenius_norm(tprod(a, x));
    CHECK(lhs >= smin * frobenius_norm(x) * (1.0 - 1e-10));
  }
}

TEST_CASE("null space basis annihilates and is orthonormal") {
  Rng rng(15);
  // wide system: duplicating a horizontal slice costs one row of circulant
  // rank per block, so the adjoint picks up n3 null directions
  Tensor3 a = gaussian_tensor({6, 9, 3}, rng);
  embed_horizontal(a, 0, horizontal_slice(a, 5));
  const Eigen::MatrixXd m = oracle::bcirc(a).transpose();
  const Eigen::MatrixXd basis = oracle::null_space_basis(m);
  REQUIRE(basis.cols() == 3);
  CHECK((m * basis).cwiseAbs().maxCoeff() < 1e-10 * m.cwiseAbs().maxCoeff());
  CHECK((basis.transpose() * basis -
         Eigen::MatrixXd::Identity(basis.cols(), basis.cols()))
            .cwiseAbs().maxCoeff() < 1e-12);

  const Tensor3 full = gaussian_tensor({5, 2, 2}, rng);
  CHECK(oracle::null_space_basis(oracle::bcirc(full)).cols() == 0);
}
