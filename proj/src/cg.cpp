#include "proxcg/cg.hpp"

#include <cmath>
#include <limits>

namespace proxcg {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

CGState CGState::init(const Vector& g) {
  CGState s;
  s.z = Vector::Zero(g.size());
  s.r = g;
  s.d = -g;
  return s;
}

void cg_step(CGState& state, const HvpFn& hvp) {
  require(state.curvature_flag == CurvatureFlag::ok, "cg_step: state already terminated");
  const Vector Hd = hvp(state.d);
  const double dHd = state.d.dot(Hd);
  if (dHd <= 0.0) {
    const double dn2 = state.d.squaredNorm();
    state.curvature_flag =
        std::abs(dHd) <= 1e-14 * dn2 ? CurvatureFlag::zero : CurvatureFlag::negative;
    return;
  }
  const double rr = state.r.squaredNorm();
  const double alpha = rr / dHd;
  state.z += alpha * state.d;
  state.r += alpha * Hd;
  const double beta = state.r.squaredNorm() / rr;
  state.d = -state.r + beta * state.d;
  state.alphas.push_back(alpha);
  state.betas.push_back(beta);
  state.directions.push_back(state.z);
  state.j += 1;
}

TridiagonalMatrix tridiagonal_from_cg(const CGState& state, int j) {
  require(j >= 1 && j <= state.j, "tridiagonal_from_cg: bad step count");
  Vector alphas(j), betas(j - 1);
  for (int i = 0; i < j; ++i) alphas[i] = state.alphas[static_cast<size_t>(i)];
  for (int i = 0; i + 1 < j; ++i) betas[i] = state.betas[static_cast<size_t>(i)];
  return build_tridiagonal(alphas, betas);
}

CauchyResult cauchy_step(const Vector& g, const HvpFn& hvp) {
  require(g.norm() > 0.0, "cauchy_step: g must be nonzero");
  const double gHg = g.dot(hvp(g));
  if (gHg <= 0.0) return {kNaN, gHg, false};
  return {g.squaredNorm() / gHg, gHg, true};
}

namespace {

struct Trial {
  Vector x_plus;
  double f_plus;
  bool accepted;
};

Trial try_stepsize(const Vector& x_k, double f_k, const Vector& g, double tau,
                   const SmoothOracle& oracle, const ProxOperator& prox, double c_min) {
  Vector x_plus = prox.prox(x_k - tau * g, tau);
  const double f_plus = oracle.value(x_plus) + prox.value(x_plus);
  const bool accepted = f_plus <= f_k - c_min * (x_plus - x_k).squaredNorm();
  return {std::move(x_plus), f_plus, accepted};
}

}  // namespace

StepsizeResult find_stepsize(const Vector& x_k, double f_k, const SmoothOracle& oracle,
                             const ProxOperator& prox, const Vector& g_k, double delta,
                             double c_min, int j_max) {
  require(delta > 0.0 && delta <= 1.0, "find_stepsize: delta must be in (0,1]");
  require(j_max >= 1, "find_stepsize: j_max must be at least 1");
  require(c_min >= 0.0, "find_stepsize: c_min must be nonnegative");

  const HvpFn hvp = [&](const Vector& w) { return oracle.hvp(x_k, w); };
  CGState state = CGState::init(g_k);

  double theta = kNaN;
  double tau = kNaN;
  bool tau_already_failed = false;

  while (state.j < j_max && state.curvature_flag == CurvatureFlag::ok) {
    cg_step(state, hvp);
    if (state.curvature_flag != CurvatureFlag::ok) break;
    theta = max_eigenvalue(tridiagonal_from_cg(state, state.j));
    if (theta == 0.0) {
      // g in the Hessian null space on the Krylov subspace; delta/|theta|
      // undefined, restart from a unit step and backtrack below.
      tau = 1.0;
      tau_already_failed = false;
      break;
    }
    tau = stepsize_from_ritz(theta, delta);
    Trial t = try_stepsize(x_k, f_k, g_k, tau, oracle, prox, c_min);
    if (t.accepted) {
      return {tau, std::move(t.x_plus), t.f_plus, theta, state.j, std::move(state), false};
    }
    tau_already_failed = true;
  }

  if (std::isnan(tau)) {
    tau = 1.0;
    tau_already_failed = false;
  }
  if (tau_already_failed) tau *= 0.5;
  for (int i = 0; i <= 60; ++i, tau *= 0.5) {
    Trial t = try_stepsize(x_k, f_k, g_k, tau, oracle, prox, c_min);
    if (t.accepted) {
      return {tau, std::move(t.x_plus), t.f_plus, theta, state.j, std::move(state), true};
    }
  }
  throw StagnationError("find_stepsize: backtracking exhausted without sufficient decrease");
}

}  // namespace proxcg
