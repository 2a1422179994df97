#include "proxcg/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace proxcg {

Vector prox_scad(const Vector& y, double tau, const ScadParams& p) {
  p.validate();
  require(tau > 0.0, "prox_scad: tau must be positive");
  require(tau < p.a - 1.0, "prox_scad: tau must be below a-1");

  const double lam = p.lambda;
  const double a = p.a;
  const double b1 = lam * (a - 1.0 - tau + a * tau) / (a - 1.0);
  const double b2 = a * lam;

  Vector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double yi = y[i];
    const double ay = std::abs(yi);
    const double s = yi >= 0.0 ? 1.0 : -1.0;
    if (ay <= b1) {
      out[i] = s * std::max(0.0, ay - tau * lam);
    } else if (ay <= b2) {
      out[i] = ((a - 1.0) * yi - s * a * tau * lam) / (a - 1.0 - tau);
    } else {
      out[i] = yi;
    }
  }
  return out;
}

double scad_value(const Vector& x, const ScadParams& p) {
  p.validate();
  const double lam = p.lambda;
  const double a = p.a;
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double t = std::abs(x[i]);
    if (t <= lam) {
      total += lam * t;
    } else if (t <= a * lam) {
      total += (2.0 * a * lam * t - t * t - lam * lam) / (2.0 * (a - 1.0));
    } else {
      total += lam * lam * (a + 1.0) / 2.0;
    }
  }
  return total;
}

Vector prox_l1(const Vector& y, double taulambda) {
  require(taulambda >= 0.0, "prox_l1: threshold must be nonnegative");
  Vector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double ay = std::abs(y[i]);
    out[i] = (y[i] >= 0.0 ? 1.0 : -1.0) * std::max(0.0, ay - taulambda);
  }
  return out;
}

Matrix project_topk_columns(const Matrix& C, int k) {
  require(k >= 1 && k <= C.rows(), "project_topk_columns: k out of range");
  Matrix out = Matrix::Zero(C.rows(), C.cols());
  std::vector<Eigen::Index> idx(C.rows());
  for (Eigen::Index j = 0; j < C.cols(); ++j) {
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    // stable sort keeps the lowest row index first on magnitude ties
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
      return std::abs(C(a, j)) > std::abs(C(b, j));
    });
    for (int t = 0; t < k; ++t) out(idx[t], j) = C(idx[t], j);
  }
  return out;
}

Matrix project_unit_columns(const Matrix& D) {
  Matrix out = D;
  for (Eigen::Index j = 0; j < D.cols(); ++j) {
    const double n = out.col(j).norm();
    if (n == 0.0) {
      out.col(j).setZero();
      out(0, j) = 1.0;
    } else {
      out.col(j) /= n;
    }
  }
  return out;
}

Vector prox_transformed(const TransformFn& forward, const TransformFn& inverse,
                        const ProxOperator& inner, const Vector& x, double tau) {
  return inverse(inner.prox(forward(x), tau));
}

TransformedProx::TransformedProx(TransformFn forward, TransformFn inverse,
                                 std::shared_ptr<const ProxOperator> inner, Eigen::Index dim)
    : forward_(std::move(forward)), inverse_(std::move(inverse)), inner_(std::move(inner)) {
  require(static_cast<bool>(forward_) && static_cast<bool>(inverse_) && inner_ != nullptr,
          "TransformedProx: missing transform or inner prox");
  // Orthonormality self-test: round-trip identity and isometry on probes.
  std::mt19937_64 rng(0x7a3f19c5u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int probe = 0; probe < 3; ++probe) {
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = gauss(rng);
    const Vector fv = forward_(v);
    const double vn = v.norm();
    if ((inverse_(fv) - v).norm() > 1e-10 * std::max(1.0, vn) ||
        std::abs(fv.norm() - vn) > 1e-10 * std::max(1.0, vn)) {
      throw std::invalid_argument("TransformedProx: transform pair is not orthonormal");
    }
  }
}

}  // namespace proxcg
