#pragma once

#include "proxcg/types.hpp"

namespace proxcg {

struct EvalResult {
  double value;
  Vector gradient;
};

/// Smooth part q of the composite objective f = q + h. Curvature is exposed
/// only through Hessian-vector products; no matrix is ever formed.
/// Implementations are immutable after construction and safe to call from
/// multiple threads.
class SmoothOracle {
 public:
  virtual ~SmoothOracle() = default;

  virtual Eigen::Index dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;

  /// Returns the exact product of the Hessian at x with w.
  virtual Vector hvp(const Vector& x, const Vector& w) const = 0;

  /// Combined value + gradient so implementations can share work.
  virtual EvalResult evaluate(const Vector& x) const {
    return {value(x), gradient(x)};
  }
};

/// Nonsmooth part h with its proximal map. value() may return +inf for
/// indicator penalties; prox() output always has finite h.
class ProxOperator {
 public:
  virtual ~ProxOperator() = default;

  virtual double value(const Vector& x) const = 0;
  virtual Vector prox(const Vector& y, double tau) const = 0;
};

/// Checked combined evaluation; throws on dimension mismatch or non-finite x.
EvalResult evaluate(const SmoothOracle& oracle, const Vector& x);

double default_fd_eps(const Vector& x, const Vector& w);

/// Central-difference Hessian-vector product,
/// (grad(x + eps w) - grad(x - eps w)) / (2 eps). Verification fallback for
/// analytic hvp implementations; returns 0 exactly when w = 0.
Vector fd_hvp(const SmoothOracle& oracle, const Vector& x, const Vector& w, double eps);
Vector fd_hvp(const SmoothOracle& oracle, const Vector& x, const Vector& w);

/// Counting decorator used by solvers to log oracle traffic.
class CountingOracle : public SmoothOracle {
 public:
  explicit CountingOracle(const SmoothOracle& inner) : inner_(inner) {}

  Eigen::Index dim() const override { return inner_.dim(); }
  double value(const Vector& x) const override {
    ++value_calls_;
    return inner_.value(x);
  }
  Vector gradient(const Vector& x) const override {
    ++gradient_calls_;
    return inner_.gradient(x);
  }
  Vector hvp(const Vector& x, const Vector& w) const override {
    ++hvp_calls_;
    return inner_.hvp(x, w);
  }
  EvalResult evaluate(const Vector& x) const override {
    ++value_calls_;
    ++gradient_calls_;
    return inner_.evaluate(x);
  }

  long hvp_calls() const { return hvp_calls_; }
  long gradient_calls() const { return gradient_calls_; }
  long value_calls() const { return value_calls_; }

 private:
  const SmoothOracle& inner_;
  mutable long hvp_calls_ = 0;
  mutable long gradient_calls_ = 0;
  mutable long value_calls_ = 0;
};

}  // namespace proxcg
