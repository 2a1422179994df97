#include "proxcg/oracles.hpp"

#include <cmath>
#include <limits>

namespace proxcg {

EvalResult evaluate(const SmoothOracle& oracle, const Vector& x) {
  require(x.size() == oracle.dim(), "evaluate: dimension mismatch");
  require_finite(x, "evaluate: x");
  EvalResult res = oracle.evaluate(x);
  return res;
}

double default_fd_eps(const Vector& x, const Vector& w) {
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  return sqrt_eps * (1.0 + x.norm()) / std::max(w.norm(), 1.0);
}

Vector fd_hvp(const SmoothOracle& oracle, const Vector& x, const Vector& w, double eps) {
  require(eps > 0.0, "fd_hvp: eps must be positive");
  require(x.size() == oracle.dim() && w.size() == oracle.dim(), "fd_hvp: dimension mismatch");
  if (w.norm() == 0.0) return Vector::Zero(x.size());
  Vector gp = oracle.gradient(x + eps * w);
  Vector gm = oracle.gradient(x - eps * w);
  return (gp - gm) / (2.0 * eps);
}

Vector fd_hvp(const SmoothOracle& oracle, const Vector& x, const Vector& w) {
  if (w.norm() == 0.0) return Vector::Zero(x.size());
  return fd_hvp(oracle, x, w, default_fd_eps(x, w));
}

}  // namespace proxcg
