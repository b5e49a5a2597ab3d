#pragma once

#include <optional>

#include "trek/spectral.hpp"
#include "trek/tensor.hpp"

namespace trek {

enum class ObjectiveKind { frobenius, elastic_net };

double soft_shrinkage_scalar(double x, double lambda);
Tensor3 soft_shrinkage(const Tensor3& x, double lambda);

// Strongly convex potential f steering the dual iteration. Both supported
// objectives have strong-convexity modulus gamma = 1 and a 1-Lipschitz
// conjugate gradient:
//   frobenius:    f = 0.5 ||X||_F^2,                grad f* = identity
//   elastic_net:  f = 0.5 ||X||_F^2 + lambda||X||_1, grad f* = soft shrinkage
class Objective {
 public:
  static Objective frobenius() { return Objective(ObjectiveKind::frobenius, 0.0); }
  static Objective elastic_net(double lambda);

  ObjectiveKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  double gamma() const { return 1.0; }

  double value(const Tensor3& x) const;            // f(x)
  double conjugate_value(const Tensor3& y) const;  // f*(y)
  Tensor3 conjugate_grad(const Tensor3& y) const;  // grad f*(y)
  void conjugate_grad_into(const Tensor3& y, Tensor3& x) const;

 private:
  Objective(ObjectiveKind kind, double lambda) : kind_(kind), lambda_(lambda) {}

  ObjectiveKind kind_;
  double lambda_;
};

// Primal point x = grad f*(y) together with the dual y that produced it.
// This is the only way iterates enter Bregman distances, which keeps the
// subgradient choice consistent.
struct BregmanPair {
  Tensor3 x;
  Tensor3 y;
};

BregmanPair make_bregman_pair(const Objective& f, const Tensor3& y);

// D(v) = f(v) + f*(pair.y) - <pair.y, v>, the Bregman distance from pair.x
// to v under subgradient pair.y. Always >= gamma/2 ||v - pair.x||_F^2.
double bregman_distance(const Objective& f, const BregmanPair& pair,
                        const Tensor3& v);

// Strong-convexity modulus of the residual-shrinking half of the iteration
// for the least-squares objective: 2 sigma_min^2 of the block circulant.
// Other objectives need a caller-supplied value.
double nu_least_squares(const Tensor3& a, RankTolerance tol = {});

}  // namespace trek
