#include "trek/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace trek {

double soft_shrinkage_scalar(double x, double lambda) {
  const double mag = std::abs(x) - lambda;
  if (mag <= 0.0) return 0.0;
  return x < 0.0 ? -mag : mag;
}

Tensor3 soft_shrinkage(const Tensor3& x, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
  Tensor3 out(x.dims());
  const double* p = x.data();
  double* q = out.data();
  for (std::int64_t i = 0; i < x.size(); ++i) q[i] = soft_shrinkage_scalar(p[i], lambda);
  return out;
}

Objective Objective::elastic_net(double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("elastic_net: lambda must be positive");
  }
  return Objective(ObjectiveKind::elastic_net, lambda);
}

double Objective::value(const Tensor3& x) const {
  const double half_fro2 = 0.5 * frobenius_norm2(x);
  if (kind_ == ObjectiveKind::frobenius) return half_fro2;
  return half_fro2 + lambda_ * one_norm(x);
}

double Objective::conjugate_value(const Tensor3& y) const {
  // Coordinatewise sup_t (y t - f(t)); for the elastic net the maximizer is
  // the shrunk value, giving 0.5 ||shrink(y)||_F^2.
  if (kind_ == ObjectiveKind::frobenius) return 0.5 * frobenius_norm2(y);
  double acc = 0.0;
  const double* p = y.data();
  for (std::int64_t i = 0; i < y.size(); ++i) {
    const double s = soft_shrinkage_scalar(p[i], lambda_);
    acc += s * s;
  }
  return 0.5 * acc;
}

void Objective::conjugate_grad_into(const Tensor3& y, Tensor3& x) const {
  if (!x.same_dims(y)) x = Tensor3(y.dims());
  const double* p = y.data();
  double* q = x.data();
  if (kind_ == ObjectiveKind::frobenius) {
    for (std::int64_t i = 0; i < y.size(); ++i) q[i] = p[i];
  } else {
    for (std::int64_t i = 0; i < y.size(); ++i) {
      q[i] = soft_shrinkage_scalar(p[i], lambda_);
    }
  }
}

Tensor3 Objective::conjugate_grad(const Tensor3& y) const {
  Tensor3 x(y.dims());
  conjugate_grad_into(y, x);
  return x;
}

BregmanPair make_bregman_pair(const Objective& f, const Tensor3& y) {
  return {f.conjugate_grad(y), y};
}

double bregman_distance(const Objective& f, const BregmanPair& pair,
                        const Tensor3& v) {
  return f.value(v) + f.conjugate_value(pair.y) - inner(pair.y, v);
}

double nu_least_squares(const Tensor3& a, RankTolerance tol) {
  const double s = sigma_min_nonzero(a, tol);
  return 2.0 * s * s;
}

}  // namespace trek
