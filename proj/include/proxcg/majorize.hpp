#pragma once

#include <optional>

#include "proxcg/cg.hpp"
#include "proxcg/oracles.hpp"
#include "proxcg/types.hpp"

namespace proxcg {

/// Line coefficients of a candidate direction zeta (already carrying the
/// tau_k/tau_c scale): A = ||zeta||^2, B = zeta' H zeta, C = <g, zeta>.
struct LineCoefficients {
  double A;
  double B;
  double C;
};

/// Admissible proximal-radius interval for the isotropic surrogate to
/// majorize the quadratic model along the candidate segment:
///   upper = A/B when B > 0, else +inf;
///   lower = 0 when A+C <= 0, else A/(A+B+C) (empty when A+B+C <= 0).
struct RadiusInterval {
  double lower = 0.0;
  double upper = 0.0;  // may be +inf
  bool empty = false;
};

RadiusInterval tau_tilde_interval(const LineCoefficients& coeffs);

/// A scaled direction with its proximal radius, trial point, and
/// certification verdict.
struct MajorizationCandidate {
  Vector z;           // raw CG direction (or -tau_c g for the fallback)
  double tau_tilde;   // unshrunk surrogate radius
  double scale;       // tau_k / tau_c
  Vector x_trial;     // prox_{xi tau_tilde h}(x_k + xi tau_tilde scale z)
  double q_trial;
  double f_trial;
  bool certified;
  int j;              // CG index of z (0 for the fallback)
};

/// Curvature-aware isotropic surrogate
///   q(x_k) - scale <z, x - x_k> + ||x - x_k||^2 / (2 radius).
double surrogate_value(const Vector& x, const Vector& x_k, double q_k, double scale,
                       const Vector& z, double radius);

/// Builds the trial point (minimizer of the xi-shrunk surrogate plus h) and
/// tests q(trial) against the unshrunk surrogate.
MajorizationCandidate certify_direction(const Vector& z, const Vector& x_k, double q_k,
                                        double tau_k, double tau_c, double tau_tilde, double xi,
                                        const SmoothOracle& oracle, const ProxOperator& prox,
                                        int j);

struct ScanResult {
  MajorizationCandidate accepted;
  std::optional<MajorizationCandidate> rejected;
};

/// Walks the CG direction sequence (continuing cg_step as needed up to j_max
/// or a curvature exit), certifying each direction; returns the last
/// certified candidate and the first failing one. When nothing certifies,
/// returns the guaranteed fallback z = -tau_c g with radius min(1, interval
/// upper bound).
ScanResult scan_directions(CGState& cg, const Vector& x_k, double q_k, const Vector& g,
                           double tau_k, const CauchyResult& cauchy, double xi,
                           const SmoothOracle& oracle, const ProxOperator& prox, int j_max);

}  // namespace proxcg
