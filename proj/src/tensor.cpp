#include "trek/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace trek {

namespace {

void check_dims(Dims3 d) {
  if (d.n1 <= 0 || d.n2 <= 0 || d.n3 <= 0) {
    throw std::invalid_argument("tensor extents must be positive, got " +
                                std::to_string(d.n1) + "x" + std::to_string(d.n2) +
                                "x" + std::to_string(d.n3));
  }
}

void check_same_dims(const Tensor3& a, const Tensor3& b, const char* op) {
  if (!a.same_dims(b)) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch");
  }
}

}  // namespace

Tensor3::Tensor3(Dims3 dims) : dims_(dims) {
  check_dims(dims);
  data_.assign(static_cast<std::size_t>(dims.count()), 0.0);
}

Tensor3 Tensor3::identity(int n, int n3) {
  Tensor3 e(n, n, n3);
  for (int i = 0; i < n; ++i) e(i, i, 0) = 1.0;
  return e;
}

Eigen::Map<Eigen::MatrixXd> Tensor3::frontal(int c) {
  return {data_.data() + offset(0, 0, c), dims_.n1, dims_.n2};
}

Eigen::Map<const Eigen::MatrixXd> Tensor3::frontal(int c) const {
  return {data_.data() + offset(0, 0, c), dims_.n1, dims_.n2};
}

Tensor3 horizontal_slice(const Tensor3& a, int i) {
  if (i < 0 || i >= a.n1()) throw std::out_of_range("horizontal_slice: bad index");
  Tensor3 s(1, a.n2(), a.n3());
  for (int c = 0; c < a.n3(); ++c) s.frontal(c) = a.frontal(c).row(i);
  return s;
}

Tensor3 lateral_slice(const Tensor3& a, int j) {
  if (j < 0 || j >= a.n2()) throw std::out_of_range("lateral_slice: bad index");
  Tensor3 s(a.n1(), 1, a.n3());
  for (int c = 0; c < a.n3(); ++c) s.frontal(c) = a.frontal(c).col(j);
  return s;
}

void embed_horizontal(Tensor3& a, int i, const Tensor3& slice) {
  if (i < 0 || i >= a.n1()) throw std::out_of_range("embed_horizontal: bad index");
  if (slice.n1() != 1 || slice.n2() != a.n2() || slice.n3() != a.n3()) {
    throw std::invalid_argument("embed_horizontal: slice shape mismatch");
  }
  for (int c = 0; c < a.n3(); ++c) a.frontal(c).row(i) = slice.frontal(c);
}

void embed_lateral(Tensor3& a, int j, const Tensor3& slice) {
  if (j < 0 || j >= a.n2()) throw std::out_of_range("embed_lateral: bad index");
  if (slice.n2() != 1 || slice.n1() != a.n1() || slice.n3() != a.n3()) {
    throw std::invalid_argument("embed_lateral: slice shape mismatch");
  }
  for (int c = 0; c < a.n3(); ++c) a.frontal(c).col(j) = slice.frontal(c);
}

void tprod_into(const Tensor3& a, const Tensor3& b, Tensor3& out) {
  if (a.n2() != b.n1() || a.n3() != b.n3()) {
    throw std::invalid_argument("tprod: inner dimensions must agree");
  }
  const int n3 = a.n3();
  if (out.n1() != a.n1() || out.n2() != b.n2() || out.n3() != n3) {
    out = Tensor3(a.n1(), b.n2(), n3);
  } else {
    scale_inplace(out, 0.0);
  }
  // Fixed ascending-shift accumulation keeps results bit-reproducible.
  for (int c = 0; c < n3; ++c) {
    auto dst = out.frontal(c);
    for (int m = 0; m < n3; ++m) {
      const int s = (c - m + n3) % n3;
      dst.noalias() += a.frontal(s) * b.frontal(m);
    }
  }
}

Tensor3 tprod(const Tensor3& a, const Tensor3& b) {
  Tensor3 out;
  tprod_into(a, b, out);
  return out;
}

Tensor3 transpose(const Tensor3& a) {
  Tensor3 t(a.n2(), a.n1(), a.n3());
  t.frontal(0) = a.frontal(0).transpose();
  for (int c = 1; c < a.n3(); ++c) {
    t.frontal(c) = a.frontal(a.n3() - c).transpose();
  }
  return t;
}

double inner(const Tensor3& a, const Tensor3& b) {
  check_same_dims(a, b, "inner");
  const double* pa = a.data();
  const double* pb = b.data();
  double acc = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) acc += pa[i] * pb[i];
  return acc;
}

double frobenius_norm2(const Tensor3& a) { return inner(a, a); }

double frobenius_norm(const Tensor3& a) { return std::sqrt(frobenius_norm2(a)); }

double one_norm(const Tensor3& a) {
  double acc = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) acc += std::abs(a.data()[i]);
  return acc;
}

double max_abs(const Tensor3& a) {
  double m = 0.0;
  for (std::int64_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i]));
  return m;
}

void add_scaled(Tensor3& acc, double alpha, const Tensor3& t) {
  check_same_dims(acc, t, "add_scaled");
  double* pa = acc.data();
  const double* pt = t.data();
  for (std::int64_t i = 0; i < acc.size(); ++i) pa[i] += alpha * pt[i];
}

void sub_inplace(Tensor3& a, const Tensor3& b) {
  check_same_dims(a, b, "sub_inplace");
  double* pa = a.data();
  const double* pb = b.data();
  for (std::int64_t i = 0; i < a.size(); ++i) pa[i] -= pb[i];
}

void add_inplace(Tensor3& a, const Tensor3& b) {
  check_same_dims(a, b, "add_inplace");
  double* pa = a.data();
  const double* pb = b.data();
  for (std::int64_t i = 0; i < a.size(); ++i) pa[i] += pb[i];
}

void scale_inplace(Tensor3& a, double alpha) {
  double* pa = a.data();
  for (std::int64_t i = 0; i < a.size(); ++i) pa[i] *= alpha;
}

Tensor3 sub(const Tensor3& a, const Tensor3& b) {
  Tensor3 out = a;
  sub_inplace(out, b);
  return out;
}

}  // namespace trek
