#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "proxcg/majorize.hpp"
#include "proxcg/oracles.hpp"
#include "proxcg/types.hpp"

namespace proxcg {

enum class Termination { tolerance, max_iters, time_limit, stagnation };

const char* termination_name(Termination t);

struct SolverConfig {
  double delta = 0.99;          // Ritz step-size safety factor, in (0,1]
  double xi = 0.95;             // surrogate radius shrink, in (0,1)
  double c_min_scale = 1e-10;   // c_min = c_min_scale * max(1, |f(x_k)|)
  int j_max = 0;                // inner CG cap; 0 resolves to min(n, 50)
  double mu_grid_factor = 0.5;  // segment-backtracking grid ratio, in (0,1)
  int max_iters = 1000;
  double tol_gradmap = 1e-6;    // on ||G_tau|| / (1 + ||x||)
  double time_limit_s = 0.0;    // 0 disables the limit
  std::uint64_t seed = 0;       // consumed by data synthesis, not the solvers
  double tau0 = 1.0;            // PG/APG initial step size

  void validate() const;
  int resolved_j_max(Eigen::Index n) const;
};

struct IterateRecord {
  int k;
  double f;
  double gradmap_norm;
  double tau_k;
  double tau_tilde;
  double mu_star;
  long cg_steps;    // inner CG steps during this outer iteration
  long hvp_count;   // cumulative Hessian-vector products
  double wall_time_s;
};

struct SolveResult {
  Vector x_final;
  std::vector<IterateRecord> trace;
  Termination termination;
  long total_hvps = 0;
  long accel_rejections = 0;  // APG: raw candidates failing the monotone test
};

/// G_tau(x) = (x - prox_{tau h}(x - tau grad q(x))) / tau; vanishes exactly at
/// first-order critical points.
Vector gradient_mapping(const Vector& x, double tau, const SmoothOracle& oracle,
                        const ProxOperator& prox);

struct SegmentResult {
  double mu_star;
  Vector x_next;
  double f_next;
  double tau_tilde;  // interpolated radius actually used
};

/// Interpolates between the accepted and rejected candidates on a geometric
/// mu-grid {1, rho, rho^2, ...} (floor 1e-3), keeping the first trial with
/// f <= f_acc; mu = 0 reproduces the accepted trial point exactly.
SegmentResult segment_backtrack(const MajorizationCandidate& acc,
                                const std::optional<MajorizationCandidate>& rej,
                                const Vector& x_k, double f_acc, double xi,
                                const SmoothOracle& oracle, const ProxOperator& prox,
                                const SolverConfig& config);

SolveResult pcg_solve(const SmoothOracle& oracle, const ProxOperator& prox, const Vector& x0,
                      const SolverConfig& config);

SolveResult pg_solve(const SmoothOracle& oracle, const ProxOperator& prox, const Vector& x0,
                     const SolverConfig& config);

SolveResult apg_solve(const SmoothOracle& oracle, const ProxOperator& prox, const Vector& x0,
                      const SolverConfig& config);

}  // namespace proxcg
