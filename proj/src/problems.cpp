#include "proxcg/problems.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>

namespace proxcg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;
}  // namespace

// --- transforms -------------------------------------------------------------

namespace {

// One orthonormal Haar split of the leading s entries of each row/column.
void haar_rows_forward(Matrix& X, Eigen::Index s) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Matrix tmp(X.rows(), s);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < s / 2; ++j) {
      const double a = X(i, 2 * j), b = X(i, 2 * j + 1);
      tmp(i, j) = (a + b) * inv_sqrt2;
      tmp(i, s / 2 + j) = (a - b) * inv_sqrt2;
    }
  }
  X.leftCols(s) = tmp;
}

void haar_rows_inverse(Matrix& X, Eigen::Index s) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Matrix tmp(X.rows(), s);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < s / 2; ++j) {
      const double a = X(i, j), d = X(i, s / 2 + j);
      tmp(i, 2 * j) = (a + d) * inv_sqrt2;
      tmp(i, 2 * j + 1) = (a - d) * inv_sqrt2;
    }
  }
  X.leftCols(s) = tmp;
}

void check_haar_size(const Matrix& X, int levels) {
  require(X.rows() == X.cols() && X.rows() >= 1, "haar: matrix must be square");
  require(levels >= 1, "haar: levels must be positive");
  Eigen::Index s = X.rows();
  for (int l = 0; l < levels; ++l) {
    require(s % 2 == 0, "haar: side must be divisible by 2^levels");
    s /= 2;
  }
}

}  // namespace

Matrix haar_dwt2(const Matrix& X, int levels) {
  check_haar_size(X, levels);
  Matrix out = X;
  Eigen::Index s = X.rows();
  for (int l = 0; l < levels; ++l) {
    Matrix block = out.topLeftCorner(s, s);
    haar_rows_forward(block, s);
    block.transposeInPlace();
    haar_rows_forward(block, s);
    block.transposeInPlace();
    out.topLeftCorner(s, s) = block;
    s /= 2;
  }
  return out;
}

Matrix haar_idwt2(const Matrix& coeffs, int levels) {
  check_haar_size(coeffs, levels);
  Matrix out = coeffs;
  Eigen::Index s = coeffs.rows() >> levels;
  for (int l = 0; l < levels; ++l) {
    s *= 2;
    Matrix block = out.topLeftCorner(s, s);
    block.transposeInPlace();
    haar_rows_inverse(block, s);
    block.transposeInPlace();
    haar_rows_inverse(block, s);
    out.topLeftCorner(s, s) = block;
  }
  return out;
}

Matrix dct_matrix(int n) {
  require(n >= 1, "dct_matrix: n must be positive");
  Matrix C(n, n);
  const double s0 = std::sqrt(1.0 / n);
  const double sk = std::sqrt(2.0 / n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      C(k, i) = (k == 0 ? s0 : sk) * std::cos(kPi * (2.0 * i + 1.0) * k / (2.0 * n));
  return C;
}

// --- quadratic ---------------------------------------------------------------

QuadraticOracle::QuadraticOracle(Matrix H, Vector c) : H_(std::move(H)), c_(std::move(c)) {
  require(H_.rows() == H_.cols() && H_.rows() == c_.size(), "QuadraticOracle: shape mismatch");
}

double QuadraticOracle::value(const Vector& x) const { return 0.5 * x.dot(H_ * x) + c_.dot(x); }

Vector QuadraticOracle::gradient(const Vector& x) const { return H_ * x + c_; }

Vector QuadraticOracle::hvp(const Vector&, const Vector& w) const { return H_ * w; }

// --- lasso -------------------------------------------------------------------

namespace {

class LassoOracle : public SmoothOracle {
 public:
  LassoOracle(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {}
  Eigen::Index dim() const override { return A_.cols(); }
  double value(const Vector& x) const override { return 0.5 * (A_ * x - b_).squaredNorm(); }
  Vector gradient(const Vector& x) const override { return A_.transpose() * (A_ * x - b_); }
  Vector hvp(const Vector&, const Vector& w) const override {
    return A_.transpose() * (A_ * w);
  }
  EvalResult evaluate(const Vector& x) const override {
    const Vector res = A_ * x - b_;
    return {0.5 * res.squaredNorm(), A_.transpose() * res};
  }

 private:
  Matrix A_;
  Vector b_;
};

}  // namespace

LassoInstance make_lasso(const Matrix& A, const Vector& b, double lambda) {
  require(lambda >= 0.0, "make_lasso: lambda must be nonnegative");
  require(A.rows() == b.size(), "make_lasso: A and b disagree");
  LassoInstance inst;
  inst.A = A;
  inst.b = b;
  inst.lambda = lambda;
  inst.oracle = std::make_shared<LassoOracle>(A, b);
  inst.prox = std::make_shared<L1Prox>(lambda);
  inst.x0 = Vector::Zero(A.cols());
  return inst;
}

LassoInstance make_conditioned_lasso(int n, double cond, double lambda, std::uint64_t seed) {
  require(n >= 2, "make_conditioned_lasso: n must be at least 2");
  require(cond >= 1.0, "make_conditioned_lasso: cond must be at least 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_orthogonal = [&](int m) {
    Matrix G(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) G(i, j) = gauss(rng);
    return Eigen::HouseholderQR<Matrix>(G).householderQ() * Matrix::Identity(m, m);
  };
  const Matrix U = random_orthogonal(n);
  const Matrix V = random_orthogonal(n);
  // singular values geometric between sqrt(cond) and 1, so cond(A'A) = cond
  Vector sv(n);
  const double smax = std::sqrt(cond);
  for (int i = 0; i < n; ++i)
    sv[i] = smax * std::pow(1.0 / smax, static_cast<double>(i) / (n - 1));
  const Matrix A = U * sv.asDiagonal() * V.transpose();
  Vector b(n);
  for (int i = 0; i < n; ++i) b[i] = gauss(rng);
  return make_lasso(A, b, lambda);
}

// --- CS-MRI ------------------------------------------------------------------

Matrix generate_mask(int N, double center_fraction, double p_outside, std::uint64_t seed) {
  require(N >= 1, "generate_mask: N must be positive");
  require(center_fraction >= 0.0 && center_fraction <= 1.0,
          "generate_mask: center_fraction must be in [0,1]");
  require(p_outside >= 0.0 && p_outside <= 1.0, "generate_mask: p_outside must be in [0,1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double c = (N - 1) / 2.0;
  const double radius = center_fraction * (N / 2.0);
  Matrix mask(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const double dist = std::hypot(i - c, j - c);
      if (dist <= radius)
        mask(i, j) = 1.0;
      else
        mask(i, j) = unif(rng) < p_outside ? 1.0 : 0.0;
    }
  }
  return mask;
}

Matrix add_noise_snr(const Matrix& Y, const Matrix& mask, double snr_db, std::uint64_t seed) {
  if (!std::isfinite(snr_db)) return Y;
  require(Y.rows() == mask.rows() && Y.cols() == mask.cols(), "add_noise_snr: shape mismatch");
  const double y_norm = Y.norm();
  require(y_norm > 0.0, "add_noise_snr: Y must be nonzero");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix G = Matrix::Zero(Y.rows(), Y.cols());
  for (Eigen::Index i = 0; i < Y.rows(); ++i)
    for (Eigen::Index j = 0; j < Y.cols(); ++j)
      if (mask(i, j) != 0.0) G(i, j) = gauss(rng);
  const double g_norm = G.norm();
  require(g_norm > 0.0, "add_noise_snr: empty mask");
  // Normalize the realized noise so the target SNR holds exactly.
  const double sigma = y_norm * std::pow(10.0, -snr_db / 20.0) / g_norm;
  return Y + sigma * G;
}

double psnr(const Matrix& X_true, const Matrix& X_rec) {
  require(X_true.rows() == X_rec.rows() && X_true.cols() == X_rec.cols(), "psnr: shape mismatch");
  const double err2 = (X_true - X_rec).squaredNorm();
  if (err2 == 0.0) return kInf;
  const double imax = X_true.maxCoeff();
  const double pixels = static_cast<double>(X_true.rows()) * static_cast<double>(X_true.cols());
  return 10.0 * std::log10(imax * imax * pixels / err2);
}

Matrix make_phantom(int N) {
  require(N >= 8, "make_phantom: N must be at least 8");
  Matrix X = Matrix::Zero(N, N);
  const double c = (N - 1) / 2.0;
  auto disk = [&](double ci, double cj, double radius, double value) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (std::hypot(i - ci, j - cj) <= radius) X(i, j) = value;
  };
  auto block = [&](int i0, int i1, int j0, int j1, double value) {
    for (int i = i0; i <= std::min(i1, N - 1); ++i)
      for (int j = j0; j <= std::min(j1, N - 1); ++j) X(i, j) = value;
  };
  disk(c, c, 0.44 * N, 0.7);
  disk(c, c, 0.36 * N, 0.4);
  block(N / 4, N / 2, N / 4, 3 * N / 8, 1.0);
  block(5 * N / 8, 3 * N / 4, N / 2, 11 * N / 16, 0.2);
  disk(0.38 * N, 0.62 * N, 0.08 * N, 0.9);
  block(9 * N / 16, 5 * N / 8, 5 * N / 16, 7 * N / 16, 0.0);
  return X;
}

namespace {

class CsMriOracle : public SmoothOracle {
 public:
  CsMriOracle(Matrix mask, Matrix Y, Matrix dct)
      : mask_(std::move(mask)), Y_(std::move(Y)), dct_(std::move(dct)), n_(mask_.rows()) {}

  Eigen::Index dim() const override { return n_ * n_; }

  double value(const Vector& x) const override {
    return 0.5 * residual(x).squaredNorm();
  }

  Vector gradient(const Vector& x) const override { return adjoint(residual(x)); }

  Vector hvp(const Vector&, const Vector& w) const override {
    const Matrix W = Eigen::Map<const Matrix>(w.data(), n_, n_);
    const Matrix proj = mask_.cwiseProduct(dct_ * W * dct_.transpose());
    return adjoint(proj);
  }

  EvalResult evaluate(const Vector& x) const override {
    const Matrix R = residual(x);
    return {0.5 * R.squaredNorm(), adjoint(R)};
  }

  Vector adjoint_data() const {
    const Matrix X0 = dct_.transpose() * Y_ * dct_;
    return Eigen::Map<const Vector>(X0.data(), n_ * n_);
  }

 private:
  Matrix residual(const Vector& x) const {
    const Matrix X = Eigen::Map<const Matrix>(x.data(), n_, n_);
    return mask_.cwiseProduct(dct_ * X * dct_.transpose()) - Y_;
  }

  Vector adjoint(const Matrix& R) const {
    const Matrix G = dct_.transpose() * mask_.cwiseProduct(R) * dct_;
    return Eigen::Map<const Vector>(G.data(), n_ * n_);
  }

  Matrix mask_;
  Matrix Y_;
  Matrix dct_;
  Eigen::Index n_;
};

}  // namespace

CsMriInstance make_csmri(const Matrix& clean, double center_fraction, double p_outside,
                         double snr_db, const ScadParams& scad, int wavelet_levels,
                         std::uint64_t seed) {
  require(clean.rows() == clean.cols(), "make_csmri: image must be square");
  const int N = static_cast<int>(clean.rows());
  require((N & (N - 1)) == 0, "make_csmri: side must be a power of 2");
  scad.validate();

  CsMriInstance inst;
  inst.image_side = N;
  inst.clean = clean;
  inst.scad = scad;
  inst.wavelet_levels = wavelet_levels;
  inst.mask = generate_mask(N, center_fraction, p_outside, seed);

  const Matrix dct = dct_matrix(N);
  const Matrix measured = inst.mask.cwiseProduct(dct * clean * dct.transpose());
  inst.Y = add_noise_snr(measured, inst.mask, snr_db, seed + 1);

  auto oracle = std::make_shared<CsMriOracle>(inst.mask, inst.Y, dct);
  inst.oracle = oracle;
  inst.x0 = oracle->adjoint_data();

  const int levels = wavelet_levels;
  TransformFn fwd = [N, levels](const Vector& v) {
    const Matrix X = Eigen::Map<const Matrix>(v.data(), N, N);
    const Matrix W = haar_dwt2(X, levels);
    return Vector(Eigen::Map<const Vector>(W.data(), N * N));
  };
  TransformFn inv = [N, levels](const Vector& v) {
    const Matrix W = Eigen::Map<const Matrix>(v.data(), N, N);
    const Matrix X = haar_idwt2(W, levels);
    return Vector(Eigen::Map<const Vector>(X.data(), N * N));
  };
  inst.prox = std::make_shared<TransformedProx>(std::move(fwd), std::move(inv),
                                                std::make_shared<ScadProx>(scad),
                                                static_cast<Eigen::Index>(N) * N);
  return inst;
}

// --- dictionary learning ------------------------------------------------------

Matrix dl_unpack_dict(const Vector& x, int m, int r) {
  return Eigen::Map<const Matrix>(x.data(), m, r);
}

Matrix dl_unpack_code(const Vector& x, int m, int r, int n) {
  return Eigen::Map<const Matrix>(x.data() + static_cast<std::ptrdiff_t>(m) * r, r, n);
}

Vector dl_pack(const Matrix& D, const Matrix& C) {
  require(D.cols() == C.rows(), "dl_pack: inner dimensions disagree");
  Vector x(D.size() + C.size());
  x.head(D.size()) = Eigen::Map<const Vector>(D.data(), D.size());
  x.tail(C.size()) = Eigen::Map<const Vector>(C.data(), C.size());
  return x;
}

namespace {

class DictLearnOracle : public SmoothOracle {
 public:
  DictLearnOracle(Matrix Y, int r) : Y_(std::move(Y)), m_(static_cast<int>(Y_.rows())),
                                     r_(r), n_(static_cast<int>(Y_.cols())) {}

  Eigen::Index dim() const override {
    return static_cast<Eigen::Index>(m_) * r_ + static_cast<Eigen::Index>(r_) * n_;
  }

  double value(const Vector& x) const override {
    const Matrix D = dl_unpack_dict(x, m_, r_);
    const Matrix C = dl_unpack_code(x, m_, r_, n_);
    return 0.5 * (D * C - Y_).squaredNorm();
  }

  Vector gradient(const Vector& x) const override {
    const Matrix D = dl_unpack_dict(x, m_, r_);
    const Matrix C = dl_unpack_code(x, m_, r_, n_);
    const Matrix R = D * C - Y_;
    return dl_pack(R * C.transpose(), D.transpose() * R);
  }

  Vector hvp(const Vector& x, const Vector& w) const override {
    const Matrix D = dl_unpack_dict(x, m_, r_);
    const Matrix C = dl_unpack_code(x, m_, r_, n_);
    const Matrix U = dl_unpack_dict(w, m_, r_);
    const Matrix V = dl_unpack_code(w, m_, r_, n_);
    const Matrix R = D * C - Y_;
    const Matrix S = U * C + D * V;  // directional derivative of DC
    return dl_pack(S * C.transpose() + R * V.transpose(),
                   D.transpose() * S + U.transpose() * R);
  }

  EvalResult evaluate(const Vector& x) const override {
    const Matrix D = dl_unpack_dict(x, m_, r_);
    const Matrix C = dl_unpack_code(x, m_, r_, n_);
    const Matrix R = D * C - Y_;
    return {0.5 * R.squaredNorm(), dl_pack(R * C.transpose(), D.transpose() * R)};
  }

 private:
  Matrix Y_;
  int m_, r_, n_;
};

class DictFeasProx : public ProxOperator {
 public:
  DictFeasProx(int m, int r, int n, int k) : m_(m), r_(r), n_(n), k_(k) {}

  double value(const Vector& x) const override {
    const Matrix D = dl_unpack_dict(x, m_, r_);
    const Matrix C = dl_unpack_code(x, m_, r_, n_);
    for (int j = 0; j < r_; ++j)
      if (std::abs(D.col(j).norm() - 1.0) > 1e-8) return kInf;
    for (int j = 0; j < n_; ++j) {
      int nnz = 0;
      for (int i = 0; i < r_; ++i)
        if (C(i, j) != 0.0) ++nnz;
      if (nnz > k_) return kInf;
    }
    return 0.0;
  }

  Vector prox(const Vector& y, double) const override {
    const Matrix D = dl_unpack_dict(y, m_, r_);
    const Matrix C = dl_unpack_code(y, m_, r_, n_);
    return dl_pack(project_unit_columns(D), project_topk_columns(C, k_));
  }

 private:
  int m_, r_, n_, k_;
};

}  // namespace

SyntheticDl generate_synthetic_dl(int m, int r, int n, int k, std::uint64_t seed) {
  require(m >= 1 && r >= 1 && n >= 1, "generate_synthetic_dl: sizes must be positive");
  require(k >= 1 && k <= r, "generate_synthetic_dl: k must be in [1, r]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SyntheticDl out;
  out.D_true.resize(m, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) out.D_true(i, j) = gauss(rng);
  }
  out.D_true = project_unit_columns(out.D_true);

  out.C_true = Matrix::Zero(r, n);
  std::vector<int> rows(static_cast<size_t>(r));
  for (int j = 0; j < n; ++j) {
    std::iota(rows.begin(), rows.end(), 0);
    // Fisher-Yates prefix for a uniform k-subset
    for (int t = 0; t < k; ++t) {
      std::uniform_int_distribution<int> pick(t, r - 1);
      std::swap(rows[static_cast<size_t>(t)], rows[static_cast<size_t>(pick(rng))]);
      out.C_true(rows[static_cast<size_t>(t)], j) = gauss(rng);
    }
  }
  out.Y = out.D_true * out.C_true;
  return out;
}

DictLearnInstance make_dictionary_learning(const Matrix& Y, int r, int k, std::uint64_t seed) {
  require(r >= 1, "make_dictionary_learning: r must be positive");
  require(k >= 1 && k <= r, "make_dictionary_learning: k must be in [1, r]");
  DictLearnInstance inst;
  inst.m = static_cast<int>(Y.rows());
  inst.r = r;
  inst.n = static_cast<int>(Y.cols());
  inst.k = k;
  inst.Y = Y;
  inst.oracle = std::make_shared<DictLearnOracle>(Y, r);
  auto prox = std::make_shared<DictFeasProx>(inst.m, r, inst.n, k);
  inst.prox = prox;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector raw(inst.oracle->dim());
  for (Eigen::Index i = 0; i < raw.size(); ++i) raw[i] = gauss(rng);
  inst.x0 = prox->prox(raw, 1.0);  // feasible start
  return inst;
}

}  // namespace proxcg
