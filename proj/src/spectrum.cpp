#include "proxcg/spectrum.hpp"

#include <cmath>
#include <limits>

namespace proxcg {

TridiagonalMatrix build_tridiagonal(const Vector& alphas, const Vector& betas) {
  const Eigen::Index j = alphas.size();
  require(j >= 1, "build_tridiagonal: need at least one alpha");
  require(betas.size() == j - 1, "build_tridiagonal: betas must have length j-1");
  for (Eigen::Index i = 0; i < j; ++i)
    require(alphas[i] > 0.0, "build_tridiagonal: alpha <= 0 (negative curvature reached builder)");
  for (Eigen::Index i = 0; i + 1 < j; ++i)
    require(betas[i] >= 0.0, "build_tridiagonal: beta < 0");

  TridiagonalMatrix T;
  T.diag.resize(j);
  T.offdiag.resize(j - 1);
  T.diag[0] = 1.0 / alphas[0];
  for (Eigen::Index l = 1; l < j; ++l)
    T.diag[l] = 1.0 / alphas[l] + betas[l - 1] / alphas[l - 1];
  for (Eigen::Index l = 0; l + 1 < j; ++l)
    T.offdiag[l] = std::sqrt(betas[l]) / alphas[l];
  return T;
}

namespace {

// Number of eigenvalues of T strictly below x (negative pivots of the
// shifted LDL^T factorization).
int eigs_below(const Vector& d, const Vector& e, double x) {
  const Eigen::Index m = d.size();
  int count = 0;
  double q = d[0] - x;
  if (q < 0.0) ++count;
  for (Eigen::Index i = 1; i < m; ++i) {
    if (q == 0.0) q = std::numeric_limits<double>::min();
    q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace

double max_eigenvalue(const TridiagonalMatrix& T) {
  const Eigen::Index m = T.diag.size();
  require(m >= 1, "max_eigenvalue: empty tridiagonal");
  if (m == 1) return T.diag[0];

  // Gershgorin enclosure.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(T.offdiag[i - 1]);
    if (i + 1 < m) r += std::abs(T.offdiag[i]);
    lo = std::min(lo, T.diag[i] - r);
    hi = std::max(hi, T.diag[i] + r);
  }

  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  const double tol = 1e-13 * scale;
  int guard = 0;
  while (hi - lo > tol && guard++ < 200) {
    const double mid = 0.5 * (lo + hi);
    if (eigs_below(T.diag, T.offdiag, mid) == static_cast<int>(m))
      hi = mid;  // all eigenvalues below mid
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double stepsize_from_ritz(double theta, double delta) {
  require(delta > 0.0 && delta <= 1.0, "stepsize_from_ritz: delta must be in (0,1]");
  if (theta == 0.0) throw std::domain_error("stepsize_from_ritz: degenerate spectrum (theta = 0)");
  return delta / std::abs(theta);
}

}  // namespace proxcg
