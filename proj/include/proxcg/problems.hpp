#pragma once

#include <cstdint>
#include <memory>

#include "proxcg/oracles.hpp"
#include "proxcg/prox.hpp"
#include "proxcg/types.hpp"

namespace proxcg {

// --- orthonormal transforms ----------------------------------------------

/// Multilevel orthonormal 2-D Haar analysis; levels must divide the side
/// (N divisible by 2^levels). idwt2 is the exact inverse.
Matrix haar_dwt2(const Matrix& X, int levels);
Matrix haar_idwt2(const Matrix& coeffs, int levels);

/// Orthonormal DCT-II matrix (C * C' = I).
Matrix dct_matrix(int n);

// --- generic dense quadratic (tests, selftest, sanity problems) ----------

/// q(x) = 0.5 x'Hx + c'x for symmetric H.
class QuadraticOracle : public SmoothOracle {
 public:
  QuadraticOracle(Matrix H, Vector c);
  Eigen::Index dim() const override { return c_.size(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Vector hvp(const Vector& x, const Vector& w) const override;
  const Matrix& hessian() const { return H_; }

 private:
  Matrix H_;
  Vector c_;
};

// --- lasso ----------------------------------------------------------------

struct LassoInstance {
  Matrix A;
  Vector b;
  double lambda;
  std::shared_ptr<SmoothOracle> oracle;
  std::shared_ptr<ProxOperator> prox;
  Vector x0;
};

/// q = 0.5 ||Ax - b||^2, h = lambda ||x||_1.
LassoInstance make_lasso(const Matrix& A, const Vector& b, double lambda);

/// Square seeded instance with prescribed condition number of A'A
/// (singular values of A geometric between sqrt(cond) and 1).
LassoInstance make_conditioned_lasso(int n, double cond, double lambda, std::uint64_t seed);

// --- CS-MRI style reconstruction ------------------------------------------

struct CsMriInstance {
  int image_side = 0;
  Matrix mask;
  Matrix Y;      // masked measurement of the noisy image
  ScadParams scad{1.0, 3.7};
  int wavelet_levels = 3;
  Matrix clean;  // ground truth, kept for PSNR
  std::shared_ptr<SmoothOracle> oracle;
  std::shared_ptr<ProxOperator> prox;
  Vector x0;     // adjoint (zero-filled) reconstruction
};

/// Fully sampled central disk of radius center_fraction * N/2 plus i.i.d.
/// Bernoulli(p_outside) samples elsewhere.
Matrix generate_mask(int N, double center_fraction, double p_outside, std::uint64_t seed);

/// Adds Gaussian noise on the sampled entries only, with the realized noise
/// normalized so the SNR in dB is met exactly. A non-finite snr_db leaves Y
/// unchanged.
Matrix add_noise_snr(const Matrix& Y, const Matrix& mask, double snr_db, std::uint64_t seed);

/// 10 log10(Imax^2 N^2 / ||X_true - X_rec||_F^2); +inf on exact equality.
double psnr(const Matrix& X_true, const Matrix& X_rec);

/// Deterministic piecewise-constant test image with values in [0, 1].
Matrix make_phantom(int N);

/// q(X) = 0.5 ||M .* F(X) - Y||_F^2 with F the orthonormal 2-D DCT;
/// h = SCAD of the orthonormal Haar coefficients.
CsMriInstance make_csmri(const Matrix& clean, double center_fraction, double p_outside,
                         double snr_db, const ScadParams& scad, int wavelet_levels,
                         std::uint64_t seed);

// --- dictionary learning ----------------------------------------------------

struct DictLearnInstance {
  int m = 0, r = 0, n = 0, k = 0;
  Matrix Y;
  std::shared_ptr<SmoothOracle> oracle;
  std::shared_ptr<ProxOperator> prox;
  Vector x0;  // feasible (projected) start
};

struct SyntheticDl {
  Matrix Y;
  Matrix D_true;
  Matrix C_true;
};

/// Gaussian dictionary with unit columns; k-sparse Gaussian codes with
/// uniformly random support; Y = D_true C_true.
SyntheticDl generate_synthetic_dl(int m, int r, int n, int k, std::uint64_t seed);

/// q(D,C) = 0.5 ||DC - Y||_F^2 over the flattened (D, C) pair; h enforces
/// unit-norm atoms and at-most-k-sparse code columns via projections.
DictLearnInstance make_dictionary_learning(const Matrix& Y, int r, int k, std::uint64_t seed);

/// Unpack helpers for the flattened dictionary-learning variable.
Matrix dl_unpack_dict(const Vector& x, int m, int r);
Matrix dl_unpack_code(const Vector& x, int m, int r, int n);
Vector dl_pack(const Matrix& D, const Matrix& C);

}  // namespace proxcg
