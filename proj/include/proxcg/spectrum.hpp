#pragma once

#include "proxcg/types.hpp"

namespace proxcg {

/// Symmetric tridiagonal assembled from CG coefficients. Only one
/// off-diagonal is stored; entries are nonnegative by construction.
struct TridiagonalMatrix {
  Vector diag;     // length j
  Vector offdiag;  // length j-1
};

struct RitzEstimate {
  double theta_max;  // largest eigenvalue of the CG tridiagonal
  int j;             // CG step count it was built from
};

/// Coefficient map from CG scalars to the Lanczos tridiagonal:
///   diag[1]   = 1/alpha^0
///   diag[l]   = 1/alpha^{l-1} + beta^{l-1}/alpha^{l-2},  l = 2..j
///   offdiag[l] = sqrt(beta^l)/alpha^{l-1},               l = 1..j-1
/// alphas holds alpha^0..alpha^{j-1} (all > 0); betas holds beta^1..beta^{j-1}
/// (all >= 0; beta^0 := 0 is implied by the signature).
TridiagonalMatrix build_tridiagonal(const Vector& alphas, const Vector& betas);

/// Largest eigenvalue via Sturm-sequence bisection, O(j) memory,
/// relative accuracy better than 1e-10.
double max_eigenvalue(const TridiagonalMatrix& T);

/// tau = delta / |theta|. Throws on theta == 0 (degenerate spectrum; the
/// caller falls back to unit step + backtracking).
double stepsize_from_ritz(double theta, double delta);

}  // namespace proxcg
