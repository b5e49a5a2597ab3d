#include "trek/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace trek {

namespace {

// Twiddle table w[j] = exp(-2 pi i j / n), mirrored so that
// w[n-j] == conj(w[j]) holds bitwise. That makes the frequency blocks of a
// real tensor exactly conjugate-symmetric, so inverse transforms of
// symmetric block sets cancel their imaginary parts exactly.
std::vector<std::complex<double>> twiddles(int n) {
  std::vector<std::complex<double>> w(n);
  w[0] = {1.0, 0.0};
  const int half = n / 2;
  for (int j = 1; j <= half; ++j) {
    const double ang = -2.0 * std::numbers::pi * j / n;
    w[j] = {std::cos(ang), std::sin(ang)};
  }
  if (n % 2 == 0 && n >= 2) w[half] = {-1.0, 0.0};
  for (int j = half + 1; j < n; ++j) w[j] = std::conj(w[n - j]);
  return w;
}

void check_tol(RankTolerance tol) {
  if (!(tol.rel_tol > 0.0)) {
    throw std::invalid_argument("RankTolerance.rel_tol must be positive");
  }
}

double sign_nonneg(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

FrequencyBlocks to_frequency(const Tensor3& a) {
  const int n1 = a.n1(), n2 = a.n2(), n3 = a.n3();
  const auto w = twiddles(n3);
  FrequencyBlocks f;
  f.dims = a.dims();
  f.blocks.resize(n3);
  for (int om = 0; om < n3; ++om) {
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(n1, n2);
    for (int c = 0; c < n3; ++c) {
      const auto tw = w[static_cast<std::size_t>(
          (static_cast<std::int64_t>(om) * c) % n3)];
      block += a.frontal(c) * tw;
    }
    f.blocks[om] = std::move(block);
  }
  return f;
}

Tensor3 from_frequency(const FrequencyBlocks& f, double imag_tol) {
  const int n1 = f.dims.n1, n2 = f.dims.n2, n3 = f.dims.n3;
  if (static_cast<int>(f.blocks.size()) != n3) {
    throw std::invalid_argument("from_frequency: block count does not match dims");
  }
  for (const auto& b : f.blocks) {
    if (b.rows() != n1 || b.cols() != n2) {
      throw std::invalid_argument("from_frequency: block shape does not match dims");
    }
  }
  const auto w = twiddles(n3);
  Tensor3 out(f.dims);
  double worst_imag = 0.0;
  Eigen::MatrixXcd acc(n1, n2);
  for (int c = 0; c < n3; ++c) {
    acc.setZero();
    for (int om = 0; om < n3; ++om) {
      // inverse kernel exp(+2 pi i w c / n) = conj(w[(w c) mod n])
      const auto tw = std::conj(w[static_cast<std::size_t>(
          (static_cast<std::int64_t>(om) * c) % n3)]);
      acc += f.blocks[om] * tw;
    }
    worst_imag = std::max(worst_imag, acc.imag().cwiseAbs().maxCoeff());
    out.frontal(c) = acc.real() / n3;
  }
  if (worst_imag / n3 > imag_tol) {
    throw std::domain_error(
        "from_frequency: imaginary residue " + std::to_string(worst_imag / n3) +
        " exceeds tolerance; blocks are not conjugate-symmetric");
  }
  return out;
}

ComplexSvd svd_complex(const Eigen::MatrixXcd& m, bool with_factors) {
  const bool swapped = m.rows() < m.cols();
  Eigen::MatrixXcd w = swapped ? Eigen::MatrixXcd(m.adjoint()) : m;
  const Eigen::Index n = w.cols();

  Eigen::MatrixXcd v;
  if (with_factors) v = Eigen::MatrixXcd::Identity(n, n);

  constexpr double kOffTol = 1e-14;
  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    // flush numerically dead columns to exact zeros; rank-deficient inputs
    // leave roundoff-direction columns that would otherwise rotate forever
    double max_norm = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      max_norm = std::max(max_norm, w.col(j).norm());
    }
    const double dead = std::numeric_limits<double>::epsilon() * max_norm;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double nj = w.col(j).norm();
      if (nj > 0.0 && nj < dead) w.col(j).setZero();
    }

    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const std::complex<double> g = w.col(p).dot(w.col(q));  // u^H v
        const double app = w.col(p).squaredNorm();
        const double aqq = w.col(q).squaredNorm();
        const double ag = std::abs(g);
        if (ag <= kOffTol * std::sqrt(app * aqq) || app == 0.0 || aqq == 0.0) {
          continue;
        }
        rotated = true;
        const std::complex<double> phase = g / ag;
        const double zeta = (aqq - app) / (2.0 * ag);
        const double t =
            sign_nonneg(zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Eigen::VectorXcd up = w.col(p);
        const Eigen::VectorXcd uq = w.col(q);
        w.col(p) = c * up - s * std::conj(phase) * uq;
        w.col(q) = s * phase * up + c * uq;
        if (with_factors) {
          const Eigen::VectorXcd vp = v.col(p);
          const Eigen::VectorXcd vq = v.col(q);
          v.col(p) = c * vp - s * std::conj(phase) * vq;
          v.col(q) = s * phase * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  if (sweep == kMaxSweeps) {
    throw std::runtime_error("svd_complex: no convergence within 100 sweeps");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Eigen::VectorXd norms(n);
  for (Eigen::Index j = 0; j < n; ++j) norms(j) = w.col(j).norm();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return norms(i) > norms(j); });

  ComplexSvd out;
  out.sigma.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) out.sigma(j) = norms(order[j]);
  if (with_factors) {
    Eigen::MatrixXcd left(w.rows(), n);
    Eigen::MatrixXcd right(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double s = norms(order[j]);
      left.col(j) = s > 0.0 ? Eigen::VectorXcd(w.col(order[j]) / s)
                            : Eigen::VectorXcd::Zero(w.rows());
      right.col(j) = v.col(order[j]);
    }
    if (swapped) {
      out.u = std::move(right);
      out.v = std::move(left);
    } else {
      out.u = std::move(left);
      out.v = std::move(right);
    }
  }
  return out;
}

double spectral_norm(const Tensor3& a) {
  const FrequencyBlocks f = to_frequency(a);
  double best = 0.0;
  for (const auto& block : f.blocks) {
    const ComplexSvd svd = svd_complex(block);
    if (svd.sigma.size() > 0) best = std::max(best, svd.sigma(0));
  }
  return best;
}

double sigma_min_nonzero(const Tensor3& a, RankTolerance tol) {
  check_tol(tol);
  const FrequencyBlocks f = to_frequency(a);
  std::vector<double> sigmas;
  for (const auto& block : f.blocks) {
    const ComplexSvd svd = svd_complex(block);
    sigmas.insert(sigmas.end(), svd.sigma.begin(), svd.sigma.end());
  }
  const double smax = *std::max_element(sigmas.begin(), sigmas.end());
  const double cut = tol.rel_tol * smax;
  double smin = -1.0;
  for (double s : sigmas) {
    if (s > cut && (smin < 0.0 || s < smin)) smin = s;
  }
  if (smin < 0.0) {
    throw std::domain_error("sigma_min_nonzero: tensor is numerically zero");
  }
  return smin;
}

namespace {

// Shared by lambda_row/lambda_col. Slicing commutes with the mode-3 DFT, so
// row i of every frequency block is exactly the transform of horizontal
// slice i, and the slice's spectral norm is the largest row norm over blocks
// (a 1 x n2 block has lone singular value equal to its euclidean norm).
double lambda_over_slices(const Tensor3& a, bool rows) {
  const FrequencyBlocks f = to_frequency(a);
  const int count = rows ? a.n1() : a.n2();
  double best = 0.0;
  for (int s = 0; s < count; ++s) {
    double spec2 = 0.0;
    for (const auto& block : f.blocks) {
      const double n2 = rows ? block.row(s).squaredNorm() : block.col(s).squaredNorm();
      spec2 = std::max(spec2, n2);
    }
    const Tensor3 slice = rows ? horizontal_slice(a, s) : lateral_slice(a, s);
    const double fro2 = frobenius_norm2(slice);
    if (fro2 == 0.0) {
      throw std::domain_error(std::string("zero ") +
                              (rows ? "horizontal" : "lateral") +
                              " slice at index " + std::to_string(s));
    }
    best = std::max(best, spec2 / fro2);
  }
  return best;
}

}  // namespace

double lambda_row(const Tensor3& a) { return lambda_over_slices(a, true); }

double lambda_col(const Tensor3& a) { return lambda_over_slices(a, false); }

Tensor3 pinv_apply(const Tensor3& a, const Tensor3& b, RankTolerance tol) {
  check_tol(tol);
  if (a.n1() != b.n1() || a.n3() != b.n3()) {
    throw std::invalid_argument("pinv_apply: dimension mismatch");
  }
  const int n3 = a.n3();
  const FrequencyBlocks fa = to_frequency(a);
  const FrequencyBlocks fb = to_frequency(b);

  std::vector<ComplexSvd> svds(n3);
  double smax = 0.0;
  for (int om = 0; om < n3; ++om) {
    svds[om] = svd_complex(fa.blocks[om], true);
    if (svds[om].sigma.size() > 0) smax = std::max(smax, svds[om].sigma(0));
  }
  const double cut = tol.rel_tol * smax;

  FrequencyBlocks fx;
  fx.dims = {a.n2(), b.n2(), n3};
  fx.blocks.resize(n3);
  for (int om = 0; om < n3; ++om) {
    const ComplexSvd& svd = svds[om];
    Eigen::MatrixXcd coeff = svd.u.adjoint() * fb.blocks[om];
    for (Eigen::Index r = 0; r < svd.sigma.size(); ++r) {
      if (svd.sigma(r) > cut) {
        coeff.row(r) /= svd.sigma(r);
      } else {
        coeff.row(r).setZero();
      }
    }
    fx.blocks[om] = svd.v * coeff;
  }
  return from_frequency(fx);
}

}  // namespace trek
