#pragma once

#include <functional>
#include <vector>

#include "proxcg/oracles.hpp"
#include "proxcg/spectrum.hpp"
#include "proxcg/types.hpp"

namespace proxcg {

enum class CurvatureFlag { ok, negative, zero };

/// Applies H (the Hessian at the current outer iterate) to a vector.
using HvpFn = std::function<Vector(const Vector&)>;

/// Inner CG iterates for one outer iteration. Initialized with
/// z = 0, r = g, d = -g; cg_step appends one coefficient pair per call.
/// directions keeps the z^1, z^2, ... snapshots so the majorization scan can
/// revisit the whole sequence.
struct CGState {
  Vector z;
  Vector r;
  Vector d;
  std::vector<double> alphas;     // alpha^0, alpha^1, ...
  std::vector<double> betas;      // beta^1, beta^2, ...
  std::vector<Vector> directions; // z after step 1, 2, ...
  int j = 0;
  CurvatureFlag curvature_flag = CurvatureFlag::ok;

  static CGState init(const Vector& g);
};

/// One CG update with negative-curvature check. If d'Hd <= 0 the state is
/// flagged (zero when |d'Hd| <= 1e-14 ||d||^2, negative otherwise) and left
/// otherwise unchanged.
void cg_step(CGState& state, const HvpFn& hvp);

/// Tridiagonal for the first j completed CG steps of state.
TridiagonalMatrix tridiagonal_from_cg(const CGState& state, int j);

struct CauchyResult {
  double tau_c;             // <g,g>/<g,Hg>, or the caller's substitute
  double gHg;               // curvature along g (NaN when substituted)
  bool positive_curvature;  // false signals <g,Hg> <= 0
};

/// Exact minimizer step of the quadratic model along -g. When <g,Hg> <= 0
/// the result carries the nonpositive-curvature signal and tau_c is
/// meaningless (callers substitute their current tau_k).
CauchyResult cauchy_step(const Vector& g, const HvpFn& hvp);

struct StepsizeResult {
  double tau;
  Vector x_plus;   // prox_{tau h}(x_k - tau g_k)
  double f_plus;   // f at x_plus
  double theta;    // last Ritz value computed (NaN if none)
  int j_used;      // CG steps completed when accepted
  CGState cg;      // live state, ready for continued refinement
  bool via_backtracking;
};

struct StagnationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Joint direction/step-size search: runs CG steps, converts the coefficient
/// history to a Ritz value, sets tau = delta/|theta|, and accepts the first
/// proximal trial satisfying f(x+) <= f_k - c_min ||x+ - x_k||^2. If j_max or
/// a curvature exit arrives first, falls back to halving tau (at most 60
/// halvings) and throws StagnationError when that is exhausted.
StepsizeResult find_stepsize(const Vector& x_k, double f_k, const SmoothOracle& oracle,
                             const ProxOperator& prox, const Vector& g_k, double delta,
                             double c_min, int j_max);

}  // namespace proxcg
