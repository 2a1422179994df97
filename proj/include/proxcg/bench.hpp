#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "proxcg/solvers.hpp"

namespace proxcg {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed benchmark run: a problem instance recipe, a solver list, and
/// SolverConfig overrides. All randomness flows from `seed`.
struct RunConfig {
  std::string problem;  // lasso | csmri | dictlearn
  std::map<std::string, std::string> problem_params;
  std::vector<std::string> solvers;  // subset of {pcg, pg, apg}
  SolverConfig solver;
  std::uint64_t seed = 42;
  std::string out_dir = "out";
};

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> max_iters;
  std::optional<double> tol;
};

/// Flat key-value config with [problem], [run], [solver] sections.
/// Throws ConfigError on unknown keys, missing files, or out-of-range values.
RunConfig parse_config(const std::string& path);
void apply_overrides(RunConfig& config, const CliOverrides& overrides);

/// Builds the instance, runs the requested solvers (concurrently when
/// PROXCG_THREADS > 1), and writes trace_<solver>.csv plus summary.csv into
/// the output directory. Returns a process exit code (0 success, 2 invalid
/// config).
int cmd_run(const RunConfig& config);
int cmd_run_file(const std::string& config_path, const CliOverrides& overrides);

/// Reads all trace_*.csv in a directory, prints the iterations/wall-time
/// table for the thresholds f_best + eps (f0 - f_best), eps in
/// {1e-2, 1e-4, 1e-6}, and writes compare.csv.
int cmd_compare(const std::string& dir);

/// Runs the property suite; exit 0 iff all checks pass.
int cmd_selftest();

}  // namespace proxcg
