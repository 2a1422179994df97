#include "proxcg/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "proxcg/cg.hpp"

namespace proxcg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct FlatDetector {
  int consecutive = 0;
  bool update(double f_prev, double f_next) {
    if (std::abs(f_prev - f_next) < 1e-15 * (1.0 + std::abs(f_next)))
      ++consecutive;
    else
      consecutive = 0;
    return consecutive >= 10;
  }
};

double composite_value(const SmoothOracle& oracle, const ProxOperator& prox, const Vector& x) {
  return oracle.value(x) + prox.value(x);
}

}  // namespace

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::tolerance: return "tolerance";
    case Termination::max_iters: return "max_iters";
    case Termination::time_limit: return "time_limit";
    case Termination::stagnation: return "stagnation";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  require(delta > 0.0 && delta <= 1.0, "SolverConfig: delta must be in (0,1]");
  require(xi > 0.0 && xi < 1.0, "SolverConfig: xi must be in (0,1)");
  require(c_min_scale >= 0.0, "SolverConfig: c_min_scale must be nonnegative");
  require(mu_grid_factor > 0.0 && mu_grid_factor < 1.0,
          "SolverConfig: mu_grid_factor must be in (0,1)");
  require(max_iters >= 1, "SolverConfig: max_iters must be positive");
  require(tol_gradmap >= 0.0, "SolverConfig: tol_gradmap must be nonnegative");
  require(j_max >= 0, "SolverConfig: j_max must be nonnegative");
  require(tau0 > 0.0, "SolverConfig: tau0 must be positive");
}

int SolverConfig::resolved_j_max(Eigen::Index n) const {
  if (j_max > 0) return j_max;
  return static_cast<int>(std::min<Eigen::Index>(n, 50));
}

Vector gradient_mapping(const Vector& x, double tau, const SmoothOracle& oracle,
                        const ProxOperator& prox) {
  require(tau > 0.0, "gradient_mapping: tau must be positive");
  const Vector g = oracle.gradient(x);
  return (x - prox.prox(x - tau * g, tau)) / tau;
}

SegmentResult segment_backtrack(const MajorizationCandidate& acc,
                                const std::optional<MajorizationCandidate>& rej,
                                const Vector& x_k, double f_acc, double xi,
                                const SmoothOracle& oracle, const ProxOperator& prox,
                                const SolverConfig& config) {
  require(acc.certified, "segment_backtrack: accepted candidate must be certified");
  if (!rej) return {0.0, acc.x_trial, acc.f_trial, acc.tau_tilde};

  const Vector off_acc = (xi * acc.tau_tilde * acc.scale) * acc.z;
  const Vector off_rej = (xi * rej->tau_tilde * rej->scale) * rej->z;
  for (double mu = 1.0; mu >= 1e-3; mu *= config.mu_grid_factor) {
    const double tt = mu * rej->tau_tilde + (1.0 - mu) * acc.tau_tilde;
    const Vector arg = x_k + mu * off_rej + (1.0 - mu) * off_acc;
    Vector x_trial = prox.prox(arg, xi * tt);
    const double f_trial = composite_value(oracle, prox, x_trial);
    if (f_trial <= f_acc) return {mu, std::move(x_trial), f_trial, tt};
  }
  return {0.0, acc.x_trial, acc.f_trial, acc.tau_tilde};
}

SolveResult pcg_solve(const SmoothOracle& oracle0, const ProxOperator& prox, const Vector& x0,
                      const SolverConfig& config) {
  config.validate();
  require(x0.size() == oracle0.dim(), "pcg_solve: x0 dimension mismatch");
  require_finite(x0, "pcg_solve: x0");

  const CountingOracle oracle(oracle0);
  const int j_max = config.resolved_j_max(x0.size());
  const auto t0 = Clock::now();

  Vector x = x0;
  double f = composite_value(oracle, prox, x);
  require(std::isfinite(f), "pcg_solve: f(x0) must be finite (x0 feasible)");

  SolveResult result;
  double theta_hat = kNaN;  // last Ritz value seen; gradmap radius = 1/|theta_hat|
  double last_gm = gradient_mapping(x, 1.0, oracle, prox).norm();
  result.trace.push_back({0, f, last_gm, 0.0, 0.0, 0.0, 0, oracle.hvp_calls(), seconds_since(t0)});

  Termination term = Termination::max_iters;
  FlatDetector flat;

  for (int k = 1; k <= config.max_iters; ++k) {
    if (last_gm / (1.0 + x.norm()) <= config.tol_gradmap) {
      term = Termination::tolerance;
      break;
    }
    if (config.time_limit_s > 0.0 && seconds_since(t0) > config.time_limit_s) {
      term = Termination::time_limit;
      break;
    }

    const EvalResult eval = oracle.evaluate(x);
    const double q_k = eval.value;
    const Vector& g = eval.gradient;
    const double c_min = config.c_min_scale * std::max(1.0, std::abs(f));

    StepsizeResult step;
    try {
      step = find_stepsize(x, f, oracle, prox, g, config.delta, c_min, j_max);
    } catch (const StagnationError&) {
      term = Termination::stagnation;
      break;
    }
    if (!std::isnan(step.theta) && step.theta != 0.0) theta_hat = step.theta;

    Vector x_next;
    double f_next;
    double mu_star = 0.0;
    double tau_tilde = 0.0;
    if (g.norm() == 0.0) {
      // No gradient information: the prox-only step from find_stepsize is the
      // whole content of this iteration.
      x_next = step.x_plus;
      f_next = step.f_plus;
    } else {
      // alpha^0 equals the Cauchy step <g,g>/<g,Hg>, so reuse it instead of
      // spending another HVP.
      const CauchyResult cauchy =
          step.cg.j >= 1
              ? CauchyResult{step.cg.alphas[0], g.squaredNorm() / step.cg.alphas[0], true}
              : CauchyResult{step.tau, kNaN, false};

      ScanResult scan = scan_directions(step.cg, x, q_k, g, step.tau, cauchy, config.xi, oracle,
                                        prox, j_max);
      SegmentResult seg = segment_backtrack(scan.accepted, scan.rejected, x,
                                            scan.accepted.f_trial, config.xi, oracle, prox,
                                            config);
      mu_star = seg.mu_star;
      tau_tilde = seg.tau_tilde;
      if (seg.f_next <= f) {
        x_next = std::move(seg.x_next);
        f_next = seg.f_next;
      } else {
        // The uncertified fallback can fail to descend on strongly
        // nonquadratic objectives; the sufficient-decrease point from the
        // step-size search always descends.
        x_next = step.x_plus;
        f_next = step.f_plus;
        mu_star = 0.0;
        tau_tilde = 0.0;
      }
    }

    const double f_prev = f;
    x = std::move(x_next);
    f = f_next;

    const double tau_gm = std::isnan(theta_hat) ? 1.0 : 1.0 / std::abs(theta_hat);
    last_gm = gradient_mapping(x, tau_gm, oracle, prox).norm();
    result.trace.push_back({k, f, last_gm, step.tau, tau_tilde, mu_star, step.cg.j,
                            oracle.hvp_calls(), seconds_since(t0)});

    if (flat.update(f_prev, f)) {
      term = Termination::stagnation;
      break;
    }
  }

  result.x_final = std::move(x);
  result.termination = term;
  result.total_hvps = oracle.hvp_calls();
  return result;
}

namespace {

// Shared shrink-only backtracking step from a feasible point: halves tau
// until f(x+) <= f_ref - c_min ||x+ - x_k||^2.
struct BacktrackOutcome {
  Vector x_plus;
  double f_plus;
  bool ok;
};

BacktrackOutcome pg_backtrack_step(const Vector& x_k, double f_ref, const Vector& g, double& tau,
                                   const SmoothOracle& oracle, const ProxOperator& prox,
                                   double c_min) {
  for (int i = 0; i <= 60; ++i) {
    Vector x_plus = prox.prox(x_k - tau * g, tau);
    const double f_plus = composite_value(oracle, prox, x_plus);
    if (f_plus <= f_ref - c_min * (x_plus - x_k).squaredNorm())
      return {std::move(x_plus), f_plus, true};
    tau *= 0.5;
  }
  return {Vector(), 0.0, false};
}

}  // namespace

SolveResult pg_solve(const SmoothOracle& oracle0, const ProxOperator& prox, const Vector& x0,
                     const SolverConfig& config) {
  config.validate();
  require(x0.size() == oracle0.dim(), "pg_solve: x0 dimension mismatch");
  require_finite(x0, "pg_solve: x0");

  const CountingOracle oracle(oracle0);
  const auto t0 = Clock::now();

  Vector x = x0;
  double f = composite_value(oracle, prox, x);
  require(std::isfinite(f), "pg_solve: f(x0) must be finite (x0 feasible)");

  SolveResult result;
  double tau = config.tau0;
  double last_gm = gradient_mapping(x, tau, oracle, prox).norm();
  result.trace.push_back({0, f, last_gm, 0.0, 0.0, 0.0, 0, 0, seconds_since(t0)});

  Termination term = Termination::max_iters;
  FlatDetector flat;

  for (int k = 1; k <= config.max_iters; ++k) {
    if (last_gm / (1.0 + x.norm()) <= config.tol_gradmap) {
      term = Termination::tolerance;
      break;
    }
    if (config.time_limit_s > 0.0 && seconds_since(t0) > config.time_limit_s) {
      term = Termination::time_limit;
      break;
    }

    const Vector g = oracle.gradient(x);
    const double c_min = config.c_min_scale * std::max(1.0, std::abs(f));
    BacktrackOutcome step = pg_backtrack_step(x, f, g, tau, oracle, prox, c_min);
    if (!step.ok) {
      term = Termination::stagnation;
      break;
    }

    const double f_prev = f;
    x = std::move(step.x_plus);
    f = step.f_plus;
    last_gm = gradient_mapping(x, tau, oracle, prox).norm();
    result.trace.push_back({k, f, last_gm, tau, 0.0, 0.0, 0, 0, seconds_since(t0)});

    if (flat.update(f_prev, f)) {
      term = Termination::stagnation;
      break;
    }
  }

  result.x_final = std::move(x);
  result.termination = term;
  result.total_hvps = oracle.hvp_calls();
  return result;
}

SolveResult apg_solve(const SmoothOracle& oracle0, const ProxOperator& prox, const Vector& x0,
                      const SolverConfig& config) {
  config.validate();
  require(x0.size() == oracle0.dim(), "apg_solve: x0 dimension mismatch");
  require_finite(x0, "apg_solve: x0");

  const CountingOracle oracle(oracle0);
  const auto t0 = Clock::now();

  Vector x = x0;
  Vector x_prev = x0;
  double f = composite_value(oracle, prox, x);
  require(std::isfinite(f), "apg_solve: f(x0) must be finite (x0 feasible)");

  SolveResult result;
  double tau = config.tau0;
  double t_prev = 1.0;
  double last_gm = gradient_mapping(x, tau, oracle, prox).norm();
  result.trace.push_back({0, f, last_gm, 0.0, 0.0, 0.0, 0, 0, seconds_since(t0)});

  Termination term = Termination::max_iters;
  FlatDetector flat;

  for (int k = 1; k <= config.max_iters; ++k) {
    if (last_gm / (1.0 + x.norm()) <= config.tol_gradmap) {
      term = Termination::tolerance;
      break;
    }
    if (config.time_limit_s > 0.0 && seconds_since(t0) > config.time_limit_s) {
      term = Termination::time_limit;
      break;
    }

    const double t_k = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_prev * t_prev));
    const Vector y = x + ((t_prev - 1.0) / t_k) * (x - x_prev);
    const Vector gy = oracle.gradient(y);
    Vector z = prox.prox(y - tau * gy, tau);
    const double fz = composite_value(oracle, prox, z);

    Vector x_next;
    double f_next;
    if (fz <= f) {
      x_next = std::move(z);
      f_next = fz;
    } else {
      // Monotone safeguard: revert to a proximal gradient step from x_k.
      ++result.accel_rejections;
      const Vector g = oracle.gradient(x);
      const double c_min = config.c_min_scale * std::max(1.0, std::abs(f));
      BacktrackOutcome step = pg_backtrack_step(x, f, g, tau, oracle, prox, c_min);
      if (!step.ok) {
        term = Termination::stagnation;
        break;
      }
      x_next = std::move(step.x_plus);
      f_next = step.f_plus;
    }

    const double f_prev_val = f;
    x_prev = std::move(x);
    x = std::move(x_next);
    f = f_next;
    t_prev = t_k;

    last_gm = gradient_mapping(x, tau, oracle, prox).norm();
    result.trace.push_back({k, f, last_gm, tau, 0.0, 0.0, 0, 0, seconds_since(t0)});

    if (flat.update(f_prev_val, f)) {
      term = Termination::stagnation;
      break;
    }
  }

  result.x_final = std::move(x);
  result.termination = term;
  result.total_hvps = oracle.hvp_calls();
  return result;
}

}  // namespace proxcg
