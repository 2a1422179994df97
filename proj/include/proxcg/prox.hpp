#pragma once

#include <functional>
#include <memory>

#include "proxcg/oracles.hpp"
#include "proxcg/types.hpp"

namespace proxcg {

struct ScadParams {
  double lambda;  // > 0
  double a;       // > 2

  void validate() const {
    require(lambda > 0.0, "ScadParams: lambda must be positive");
    require(a > 2.0, "ScadParams: a must exceed 2");
  }
};

/// Componentwise prox of tau * scad penalty. Thresholds
/// b1 = lambda (a-1-tau+a tau)/(a-1) and b2 = a lambda; requires tau < a-1
/// so the middle-branch denominator stays positive.
Vector prox_scad(const Vector& y, double tau, const ScadParams& p);

/// Sum of componentwise SCAD values: lambda|t| on [0, lambda],
/// (2 a lambda |t| - t^2 - lambda^2)/(2(a-1)) on (lambda, a lambda],
/// lambda^2 (a+1)/2 beyond.
double scad_value(const Vector& x, const ScadParams& p);

/// Soft threshold sgn(y) max(0, |y| - taulambda).
Vector prox_l1(const Vector& y, double taulambda);

/// Keeps the k largest-magnitude entries per column, zeroing the rest.
/// Magnitude ties keep the lowest row index.
Matrix project_topk_columns(const Matrix& C, int k);

/// Normalizes each column to unit l2 norm; an exactly-zero column maps to the
/// first canonical basis vector.
Matrix project_unit_columns(const Matrix& D);

using TransformFn = std::function<Vector(const Vector&)>;

/// Prox through an orthonormal change of basis:
/// inverse(inner.prox(forward(x), tau)).
Vector prox_transformed(const TransformFn& forward, const TransformFn& inverse,
                        const ProxOperator& inner, const Vector& x, double tau);

// --- ProxOperator implementations ---------------------------------------

class ZeroProx : public ProxOperator {
 public:
  double value(const Vector&) const override { return 0.0; }
  Vector prox(const Vector& y, double) const override { return y; }
};

class L1Prox : public ProxOperator {
 public:
  explicit L1Prox(double lambda) : lambda_(lambda) {
    require(lambda >= 0.0, "L1Prox: lambda must be nonnegative");
  }
  double value(const Vector& x) const override { return lambda_ * x.lpNorm<1>(); }
  Vector prox(const Vector& y, double tau) const override { return prox_l1(y, tau * lambda_); }
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

class ScadProx : public ProxOperator {
 public:
  explicit ScadProx(ScadParams p) : p_(p) { p_.validate(); }
  double value(const Vector& x) const override { return scad_value(x, p_); }
  Vector prox(const Vector& y, double tau) const override { return prox_scad(y, tau, p_); }
  const ScadParams& params() const { return p_; }

 private:
  ScadParams p_;
};

/// h(x) = inner(forward(x)) for an orthonormal forward map. Construction
/// self-tests round-trip identity and isometry on seeded probe vectors and
/// throws if the pair is not orthonormal.
class TransformedProx : public ProxOperator {
 public:
  TransformedProx(TransformFn forward, TransformFn inverse,
                  std::shared_ptr<const ProxOperator> inner, Eigen::Index dim);

  double value(const Vector& x) const override { return inner_->value(forward_(x)); }
  Vector prox(const Vector& y, double tau) const override {
    return prox_transformed(forward_, inverse_, *inner_, y, tau);
  }

 private:
  TransformFn forward_;
  TransformFn inverse_;
  std::shared_ptr<const ProxOperator> inner_;
};

}  // namespace proxcg
