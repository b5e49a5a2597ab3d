#include "trek/oracle.hpp"

#include <stdexcept>

#include <Eigen/SVD>

namespace trek::oracle {

Eigen::MatrixXd bcirc(const Tensor3& a) {
  const int n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n1) * n3,
                    static_cast<Eigen::Index>(n2) * n3);
  for (int r = 0; r < n3; ++r) {
    for (int c = 0; c < n3; ++c) {
      m.block(static_cast<Eigen::Index>(r) * n1, static_cast<Eigen::Index>(c) * n2,
              n1, n2) = a.frontal((r - c + n3) % n3);
    }
  }
  return m;
}

Eigen::MatrixXd unfold(const Tensor3& a) {
  const int n1 = a.n1(), n3 = a.n3();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n1) * n3, a.n2());
  for (int c = 0; c < n3; ++c) {
    m.block(static_cast<Eigen::Index>(c) * n1, 0, n1, a.n2()) = a.frontal(c);
  }
  return m;
}

Tensor3 fold(const Eigen::MatrixXd& m, Dims3 dims) {
  if (m.rows() != static_cast<Eigen::Index>(dims.n1) * dims.n3 ||
      m.cols() != dims.n2) {
    throw std::invalid_argument("fold: matrix shape does not match target dims");
  }
  Tensor3 t(dims);
  for (int c = 0; c < dims.n3; ++c) {
    t.frontal(c) =
        m.block(static_cast<Eigen::Index>(c) * dims.n1, 0, dims.n1, dims.n2);
  }
  return t;
}

Tensor3 tprod_reference(const Tensor3& a, const Tensor3& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3()) {
    throw std::invalid_argument("tprod_reference: inner dimensions must agree");
  }
  Eigen::MatrixXd prod = bcirc(a) * unfold(b);
  return fold(prod, {a.n1(), b.n2(), a.n3()});
}

DenseSvd dense_svd(const Eigen::MatrixXd& m, bool with_factors) {
  DenseSvd out;
  if (with_factors) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.sigma = svd.singularValues();
    out.u = svd.matrixU();
    out.v = svd.matrixV();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    out.sigma = svd.singularValues();
  }
  return out;
}

double spectral_norm_dense(const Tensor3& a) {
  Eigen::VectorXd s = dense_svd(bcirc(a)).sigma;
  return s.size() > 0 ? s(0) : 0.0;
}

double sigma_min_nonzero_dense(const Tensor3& a, double rel_tol) {
  if (rel_tol <= 0.0) throw std::invalid_argument("rel_tol must be positive");
  Eigen::VectorXd s = dense_svd(bcirc(a)).sigma;
  const double cut = rel_tol * s(0);
  double smin = -1.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) smin = s(i);  // descending order: last one above the cut
  }
  if (smin < 0.0) {
    throw std::domain_error("sigma_min_nonzero: tensor is numerically zero");
  }
  return smin;
}

namespace {

double slice_ratio(const Tensor3& slice, const char* what, int index) {
  const double fro2 = frobenius_norm2(slice);
  if (fro2 == 0.0) {
    throw std::domain_error(std::string("zero ") + what + " slice at index " +
                            std::to_string(index));
  }
  const double s = spectral_norm_dense(slice);
  return s * s / fro2;
}

}  // namespace

double lambda_row_dense(const Tensor3& a) {
  double best = 0.0;
  for (int i = 0; i < a.n1(); ++i) {
    best = std::max(best, slice_ratio(horizontal_slice(a, i), "horizontal", i));
  }
  return best;
}

double lambda_col_dense(const Tensor3& a) {
  double best = 0.0;
  for (int j = 0; j < a.n2(); ++j) {
    best = std::max(best, slice_ratio(lateral_slice(a, j), "lateral", j));
  }
  return best;
}

Tensor3 pinv_apply_dense(const Tensor3& a, const Tensor3& b, double rel_tol) {
  if (rel_tol <= 0.0) throw std::invalid_argument("rel_tol must be positive");
  if (a.n1() != b.n1() || a.n3() != b.n3()) {
    throw std::invalid_argument("pinv_apply_dense: dimension mismatch");
  }
  DenseSvd svd = dense_svd(bcirc(a), true);
  const double cut = rel_tol * svd.sigma(0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(svd.sigma.size());
  for (Eigen::Index i = 0; i < svd.sigma.size(); ++i) {
    if (svd.sigma(i) > cut) inv(i) = 1.0 / svd.sigma(i);
  }
  Eigen::MatrixXd x =
      svd.v * (inv.asDiagonal() * (svd.u.transpose() * unfold(b)));
  return fold(x, {a.n2(), b.n2(), a.n3()});
}

Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& m, double rel_tol) {
  if (rel_tol <= 0.0) throw std::invalid_argument("rel_tol must be positive");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double cut = rel_tol * smax;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) ++rank;
  }
  return svd.matrixV().rightCols(m.cols() - rank);
}

}  // namespace trek::oracle
