#pragma once

#include <functional>
#include <string>
#include <vector>

namespace proxcg {

struct SelfTestCheck {
  std::string name;
  std::function<bool()> run;
};

/// The fast deterministic property suite: finite-difference oracle checks,
/// prox grid oracles, tridiagonal/Ritz checks, Lemma-2 radius sampling, CG
/// conjugacy, and the CS-MRI projector identity. Every check uses fixed
/// seeds.
std::vector<SelfTestCheck> selftest_checks();

/// Runs all checks, printing one PASS/FAIL line per check to stdout.
/// Returns true iff all pass.
bool run_selftest();

}  // namespace proxcg
