#pragma once

#include <random>

#include <Eigen/Dense>

#include "proxcg/oracles.hpp"
#include "proxcg/problems.hpp"
#include "proxcg/types.hpp"

namespace proxcg::testing {

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = gauss(rng);
  return M;
}

inline Matrix random_spd(std::mt19937_64& rng, int n, double shift = 0.5) {
  const Matrix G = random_matrix(rng, n, n);
  return G * G.transpose() / n + shift * Matrix::Identity(n, n);
}

inline double rel_err(const Vector& got, const Vector& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

inline Matrix dense_tridiagonal(const TridiagonalMatrix& T) {
  const Eigen::Index m = T.diag.size();
  Matrix M = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) M(i, i) = T.diag[i];
  for (Eigen::Index i = 0; i + 1 < m; ++i) M(i, i + 1) = M(i + 1, i) = T.offdiag[i];
  return M;
}

}  // namespace proxcg::testing
