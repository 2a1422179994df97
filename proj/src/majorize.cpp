#include "proxcg/majorize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace proxcg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTauTildeFloor = 1e-12;
constexpr double kTauTildeCap = 1e6;
}  // namespace

RadiusInterval tau_tilde_interval(const LineCoefficients& coeffs) {
  require(coeffs.A > 0.0, "tau_tilde_interval: A must be positive");
  RadiusInterval out;
  out.upper = coeffs.B > 0.0 ? coeffs.A / coeffs.B : kInf;
  const double apc = coeffs.A + coeffs.C;
  if (apc <= 0.0) {
    out.lower = 0.0;
  } else {
    const double abc = coeffs.A + coeffs.B + coeffs.C;
    if (abc <= 0.0) {
      out.empty = true;
      return out;
    }
    out.lower = coeffs.A / abc;
  }
  if (out.lower > out.upper) out.empty = true;
  return out;
}

double surrogate_value(const Vector& x, const Vector& x_k, double q_k, double scale,
                       const Vector& z, double radius) {
  require(radius > 0.0, "surrogate_value: radius must be positive");
  const Vector dx = x - x_k;
  return q_k - scale * z.dot(dx) + dx.squaredNorm() / (2.0 * radius);
}

MajorizationCandidate certify_direction(const Vector& z, const Vector& x_k, double q_k,
                                        double tau_k, double tau_c, double tau_tilde, double xi,
                                        const SmoothOracle& oracle, const ProxOperator& prox,
                                        int j) {
  require(tau_tilde > 0.0, "certify_direction: tau_tilde must be positive");
  require(xi > 0.0 && xi < 1.0, "certify_direction: xi must be in (0,1)");
  const double scale = tau_k / tau_c;
  const Vector x_trial = prox.prox(x_k + (xi * tau_tilde * scale) * z, xi * tau_tilde);
  const double q_trial = oracle.value(x_trial);
  const double m_val = surrogate_value(x_trial, x_k, q_k, scale, z, tau_tilde);
  const bool certified = q_trial <= m_val + 1e-12 * (1.0 + std::abs(q_trial));
  const double f_trial = q_trial + prox.value(x_trial);
  return {z, tau_tilde, scale, x_trial, q_trial, f_trial, certified, j};
}

ScanResult scan_directions(CGState& cg, const Vector& x_k, double q_k, const Vector& g,
                           double tau_k, const CauchyResult& cauchy, double xi,
                           const SmoothOracle& oracle, const ProxOperator& prox, int j_max) {
  const HvpFn hvp = [&](const Vector& w) { return oracle.hvp(x_k, w); };
  const double tau_c = cauchy.positive_curvature ? cauchy.tau_c : tau_k;
  const double scale = tau_k / tau_c;

  std::optional<MajorizationCandidate> last_certified;
  std::optional<MajorizationCandidate> first_failed;

  int idx = 0;
  while (true) {
    if (idx >= static_cast<int>(cg.directions.size())) {
      if (cg.curvature_flag != CurvatureFlag::ok || cg.j >= j_max) break;
      cg_step(cg, hvp);
      if (idx >= static_cast<int>(cg.directions.size())) break;  // curvature exit
    }
    const Vector& z = cg.directions[static_cast<size_t>(idx)];
    ++idx;

    const Vector zeta = scale * z;
    const double A = zeta.squaredNorm();
    if (A == 0.0) continue;
    const Vector Hzeta = hvp(zeta);  // one HVP per scanned direction
    const LineCoefficients coeffs{A, zeta.dot(Hzeta), g.dot(zeta)};

    const RadiusInterval interval = tau_tilde_interval(coeffs);
    if (interval.empty) continue;  // skip; neither accepted nor rejected
    const double tt =
        std::clamp(std::isfinite(interval.upper) ? interval.upper : kTauTildeCap, kTauTildeFloor,
                   kTauTildeCap);

    MajorizationCandidate cand =
        certify_direction(z, x_k, q_k, tau_k, tau_c, tt, xi, oracle, prox, idx);
    if (cand.certified) {
      last_certified = std::move(cand);
    } else {
      first_failed = std::move(cand);
      break;
    }
  }

  if (!last_certified) {
    // Worst-case direction: the pure gradient step scaled by the Cauchy
    // length; its surrogate reduces to a proximal-gradient model, so it is
    // accepted without running the test.
    const Vector z_fb = -tau_c * g;
    const double upper_fb =
        cauchy.positive_curvature ? g.squaredNorm() / cauchy.gHg : kInf;
    const double tt = std::min(1.0, upper_fb);
    MajorizationCandidate fb =
        certify_direction(z_fb, x_k, q_k, tau_k, tau_c, tt, xi, oracle, prox, 0);
    fb.certified = true;
    last_certified = std::move(fb);
  }

  return {std::move(*last_certified), std::move(first_failed)};
}

}  // namespace proxcg
