#include <string>

#include "CLI11.hpp"
#include "proxcg/bench.hpp"

int main(int argc, char** argv) {
  CLI::App app{"proxcg-bench: composite-minimization solver benchmark harness"};
  app.require_subcommand(1);

  std::string config_path;
  proxcg::CliOverrides overrides;
  std::uint64_t seed = 0;
  std::string out_dir;
  int max_iters = 0;
  double tol = 0.0;

  CLI::App* run = app.add_subcommand("run", "run the solvers described by a config file");
  run->add_option("config", config_path, "path to the config file")->required();
  CLI::Option* opt_seed = run->add_option("--seed", seed, "override the config seed");
  CLI::Option* opt_out = run->add_option("--out", out_dir, "override the output directory");
  CLI::Option* opt_iters = run->add_option("--max-iters", max_iters, "override max iterations");
  CLI::Option* opt_tol = run->add_option("--tol", tol, "override the gradient-mapping tolerance");

  std::string compare_dir;
  CLI::App* compare = app.add_subcommand("compare", "tabulate traces in an output directory");
  compare->add_option("dir", compare_dir, "directory with trace_*.csv files")->required();

  app.add_subcommand("selftest", "run the fast property suite");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (opt_seed->count()) overrides.seed = seed;
    if (opt_out->count()) overrides.out_dir = out_dir;
    if (opt_iters->count()) overrides.max_iters = max_iters;
    if (opt_tol->count()) overrides.tol = tol;
    return proxcg::cmd_run_file(config_path, overrides);
  }
  if (compare->parsed()) return proxcg::cmd_compare(compare_dir);
  return proxcg::cmd_selftest();
}
