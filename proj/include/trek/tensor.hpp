#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace trek {

struct Dims3 {
  int n1 = 0;  // rows (horizontal slices)
  int n2 = 0;  // columns (lateral slices)
  int n3 = 0;  // frontal slices

  bool operator==(const Dims3&) const = default;
  std::int64_t count() const {
    return static_cast<std::int64_t>(n1) * n2 * n3;
  }
};

// Dense real third-order tensor.
//
// Storage contract: frontal-slice-major, column-major within a slice.
// Entry (i, j, c) lives at data()[c*n1*n2 + j*n1 + i]. This is also the
// on-disk payload order and the order the python bindings expose
// (a Fortran-ordered numpy array of shape (n1, n2, n3) matches it exactly).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(Dims3 dims);
  Tensor3(int n1, int n2, int n3) : Tensor3(Dims3{n1, n2, n3}) {}

  static Tensor3 zeros(Dims3 dims) { return Tensor3(dims); }
  // Frontal slice 0 is I, the rest are zero: the t-product identity.
  static Tensor3 identity(int n, int n3);

  const Dims3& dims() const { return dims_; }
  int n1() const { return dims_.n1; }
  int n2() const { return dims_.n2; }
  int n3() const { return dims_.n3; }
  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator()(int i, int j, int c) { return data_[offset(i, j, c)]; }
  double operator()(int i, int j, int c) const { return data_[offset(i, j, c)]; }

  Eigen::Map<Eigen::MatrixXd> frontal(int c);
  Eigen::Map<const Eigen::MatrixXd> frontal(int c) const;

  bool same_dims(const Tensor3& other) const { return dims_ == other.dims_; }

 private:
  std::int64_t offset(int i, int j, int c) const {
    return static_cast<std::int64_t>(c) * dims_.n1 * dims_.n2 +
           static_cast<std::int64_t>(j) * dims_.n1 + i;
  }

  Dims3 dims_;
  std::vector<double> data_;
};

// Slice extraction keeps the tensor rank: a horizontal slice is 1 x n2 x n3,
// a lateral slice n1 x 1 x n3.
Tensor3 horizontal_slice(const Tensor3& a, int i);
Tensor3 lateral_slice(const Tensor3& a, int j);
void embed_horizontal(Tensor3& a, int i, const Tensor3& slice);
void embed_lateral(Tensor3& a, int j, const Tensor3& slice);

// t-product: frontal slices circularly convolve, C_c = sum_m A_{(c-m) mod n3} B_m.
Tensor3 tprod(const Tensor3& a, const Tensor3& b);
void tprod_into(const Tensor3& a, const Tensor3& b, Tensor3& out);

// Slice 0 transposed in place, slices 1..n3-1 transposed and reversed.
Tensor3 transpose(const Tensor3& a);

double inner(const Tensor3& a, const Tensor3& b);
double frobenius_norm2(const Tensor3& a);
double frobenius_norm(const Tensor3& a);
double one_norm(const Tensor3& a);
double max_abs(const Tensor3& a);

// acc += alpha * t
void add_scaled(Tensor3& acc, double alpha, const Tensor3& t);
void sub_inplace(Tensor3& a, const Tensor3& b);
void add_inplace(Tensor3& a, const Tensor3& b);
void scale_inplace(Tensor3& a, double alpha);
Tensor3 sub(const Tensor3& a, const Tensor3& b);

}  // namespace trek
