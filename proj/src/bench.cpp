#include "proxcg/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "proxcg/io.hpp"
#include "proxcg/problems.hpp"
#include "proxcg/selftest.hpp"

namespace proxcg {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": '" + value + "'");
  }
}

int to_int(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (v != std::floor(v)) throw ConfigError("config: expected integer for " + key);
  return static_cast<int>(v);
}

struct ProblemBundle {
  std::shared_ptr<SmoothOracle> oracle;
  std::shared_ptr<ProxOperator> prox;
  Vector x0;
  // for PSNR reporting on image problems
  std::optional<Matrix> clean;
  int image_side = 0;
};

double param_or(const RunConfig& c, const std::string& key, double fallback) {
  auto it = c.problem_params.find(key);
  return it == c.problem_params.end() ? fallback : to_double(key, it->second);
}

int param_or_int(const RunConfig& c, const std::string& key, int fallback) {
  auto it = c.problem_params.find(key);
  return it == c.problem_params.end() ? fallback : to_int(key, it->second);
}

ProblemBundle build_problem(const RunConfig& config) {
  ProblemBundle bundle;
  if (config.problem == "lasso") {
    const int n = param_or_int(config, "n", 50);
    const double cond = param_or(config, "cond", 100.0);
    const double lambda = param_or(config, "lambda", 0.1);
    auto inst = make_conditioned_lasso(n, cond, lambda, config.seed);
    bundle.oracle = inst.oracle;
    bundle.prox = inst.prox;
    bundle.x0 = inst.x0;
  } else if (config.problem == "csmri") {
    const int N = param_or_int(config, "image_side", 64);
    const double cf = param_or(config, "center_fraction", 0.3);
    const double p = param_or(config, "p_outside", 0.25);
    const double snr = param_or(config, "snr_db", 25.0);
    const int levels = param_or_int(config, "wavelet_levels", 3);
    const Matrix clean = make_phantom(N);
    const double imax = clean.maxCoeff();
    const ScadParams scad{param_or(config, "lambda", 0.002 * imax), param_or(config, "a", 3.7)};
    auto inst = make_csmri(clean, cf, p, snr, scad, levels, config.seed);
    bundle.oracle = inst.oracle;
    bundle.prox = inst.prox;
    bundle.x0 = inst.x0;
    bundle.clean = inst.clean;
    bundle.image_side = N;
  } else if (config.problem == "dictlearn") {
    const int m = param_or_int(config, "m", 25);
    const int r = param_or_int(config, "r", 50);
    const int n = param_or_int(config, "n", 100);
    const int k = param_or_int(config, "k", 3);
    auto data = generate_synthetic_dl(m, r, n, k, config.seed);
    auto inst = make_dictionary_learning(data.Y, r, k, config.seed + 1);
    bundle.oracle = inst.oracle;
    bundle.prox = inst.prox;
    bundle.x0 = inst.x0;
  } else {
    throw ConfigError("config: unknown problem '" + config.problem + "'");
  }
  return bundle;
}

const std::vector<std::string> kKnownProblemKeys = {
    "type", "n", "cond", "lambda", "image_side", "center_fraction", "p_outside",
    "snr_db", "a", "wavelet_levels", "m", "r", "k"};

int max_threads() {
  const char* env = std::getenv("PROXCG_THREADS");
  if (env == nullptr) return 1;
  const int v = std::atoi(env);
  return v >= 1 ? v : 1;
}

}  // namespace

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw ConfigError("config: cannot open " + path);

  RunConfig config;
  config.solvers = {"pcg", "pg", "apg"};
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config: malformed section at line " +
                                                std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      if (section != "problem" && section != "run" && section != "solver")
        throw ConfigError("config: unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: empty key or value at line " + std::to_string(lineno));

    if (section == "problem") {
      if (std::find(kKnownProblemKeys.begin(), kKnownProblemKeys.end(), key) ==
          kKnownProblemKeys.end())
        throw ConfigError("config: unknown problem key '" + key + "'");
      if (key == "type")
        config.problem = value;
      else
        config.problem_params[key] = value;
    } else if (section == "run") {
      if (key == "solvers") {
        config.solvers = split(value, ',');
        if (config.solvers.empty()) throw ConfigError("config: empty solver list");
        for (const std::string& s : config.solvers)
          if (s != "pcg" && s != "pg" && s != "apg")
            throw ConfigError("config: unknown solver '" + s + "'");
      } else if (key == "seed") {
        config.seed = static_cast<std::uint64_t>(std::stoull(value));
      } else if (key == "out") {
        config.out_dir = value;
      } else {
        throw ConfigError("config: unknown run key '" + key + "'");
      }
    } else if (section == "solver") {
      if (key == "delta") config.solver.delta = to_double(key, value);
      else if (key == "xi") config.solver.xi = to_double(key, value);
      else if (key == "c_min_scale") config.solver.c_min_scale = to_double(key, value);
      else if (key == "j_max") config.solver.j_max = to_int(key, value);
      else if (key == "mu_grid_factor") config.solver.mu_grid_factor = to_double(key, value);
      else if (key == "max_iters") config.solver.max_iters = to_int(key, value);
      else if (key == "tol_gradmap") config.solver.tol_gradmap = to_double(key, value);
      else if (key == "time_limit_s") config.solver.time_limit_s = to_double(key, value);
      else if (key == "tau0") config.solver.tau0 = to_double(key, value);
      else throw ConfigError("config: unknown solver key '" + key + "'");
    } else {
      throw ConfigError("config: key outside any section at line " + std::to_string(lineno));
    }
  }
  if (config.problem.empty()) throw ConfigError("config: [problem] type is required");
  try {
    config.solver.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config;
}

void apply_overrides(RunConfig& config, const CliOverrides& overrides) {
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.out_dir) config.out_dir = *overrides.out_dir;
  if (overrides.max_iters) config.solver.max_iters = *overrides.max_iters;
  if (overrides.tol) config.solver.tol_gradmap = *overrides.tol;
}

int cmd_run(const RunConfig& config) {
  ProblemBundle bundle;
  try {
    config.solver.validate();
    bundle = build_problem(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  SolverConfig solver_config = config.solver;
  solver_config.seed = config.seed;

  struct Job {
    std::string name;
    SolveResult result;
  };
  std::vector<Job> jobs;
  for (const std::string& name : config.solvers) jobs.push_back({name, {}});

  auto run_one = [&](Job& job) {
    if (job.name == "pcg")
      job.result = pcg_solve(*bundle.oracle, *bundle.prox, bundle.x0, solver_config);
    else if (job.name == "pg")
      job.result = pg_solve(*bundle.oracle, *bundle.prox, bundle.x0, solver_config);
    else
      job.result = apg_solve(*bundle.oracle, *bundle.prox, bundle.x0, solver_config);
  };

  const int threads = max_threads();
  if (threads <= 1) {
    for (Job& job : jobs) run_one(job);
  } else {
    // Solvers share only the immutable instance; each job is independent.
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int t = 0; t < std::min<int>(threads, static_cast<int>(jobs.size())); ++t) {
      pool.emplace_back([&]() {
        for (size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1))
          run_one(jobs[i]);
      });
    }
    for (std::thread& th : pool) th.join();
  }

  // Single collector writes all files after the solves finish.
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory " << config.out_dir << '\n';
    return 2;
  }

  std::ofstream summary(config.out_dir + "/summary.csv");
  summary << "solver,termination,final_f,final_gradmap,iterations,total_hvps,wall_time_s,psnr\n";
  for (const Job& job : jobs) {
    save_trace_csv(config.out_dir + "/trace_" + job.name + ".csv", job.result.trace);
    const IterateRecord& last = job.result.trace.back();
    std::string psnr_cell = "-";
    if (bundle.clean) {
      const int N = bundle.image_side;
      const Matrix rec = Eigen::Map<const Matrix>(job.result.x_final.data(), N, N);
      psnr_cell = format_double(psnr(*bundle.clean, rec));
    }
    summary << job.name << ',' << termination_name(job.result.termination) << ','
            << format_double(last.f) << ',' << format_double(last.gradmap_norm) << ','
            << last.k << ',' << job.result.total_hvps << ','
            << format_double(last.wall_time_s) << ',' << psnr_cell << '\n';
  }
  if (!summary.good()) {
    std::cerr << "error: failed writing summary.csv\n";
    return 2;
  }
  return 0;
}

int cmd_run_file(const std::string& config_path, const CliOverrides& overrides) {
  RunConfig config;
  try {
    config = parse_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  apply_overrides(config, overrides);
  return cmd_run(config);
}

int cmd_compare(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<std::pair<std::string, std::vector<IterateRecord>>> traces;
  if (fs::is_directory(dir)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("trace_", 0) == 0 && name.size() > 10 &&
          name.substr(name.size() - 4) == ".csv")
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& p : files) {
      const std::string fname = p.filename().string();
      const std::string solver = fname.substr(6, fname.size() - 10);
      traces.emplace_back(solver, load_trace_csv(p.string()));
    }
  }
  if (traces.size() < 2) {
    std::cerr << "error: need at least 2 trace files in " << dir << '\n';
    return 2;
  }

  double f_best = std::numeric_limits<double>::infinity();
  for (const auto& [name, trace] : traces)
    for (const IterateRecord& r : trace) f_best = std::min(f_best, r.f);
  const double f0 = traces.front().second.front().f;
  const std::vector<double> eps = {1e-2, 1e-4, 1e-6};

  std::ostringstream table;
  table << std::left << std::setw(8) << "solver";
  for (double e : eps) {
    std::ostringstream h1, h2;
    h1 << "iters@" << e;
    h2 << "time@" << e;
    table << std::setw(14) << h1.str() << std::setw(14) << h2.str();
  }
  table << '\n';

  std::ofstream csv(dir + "/compare.csv");
  csv << "solver,eps,iters,wall_time_s\n";
  for (const auto& [name, trace] : traces) {
    table << std::left << std::setw(8) << name;
    for (double e : eps) {
      const double threshold = f_best + e * (f0 - f_best);
      std::optional<IterateRecord> hit;
      for (const IterateRecord& r : trace) {
        if (r.f <= threshold) {
          hit = r;
          break;
        }
      }
      if (hit) {
        table << std::setw(14) << hit->k << std::setw(14) << hit->wall_time_s;
        csv << name << ',' << format_double(e) << ',' << hit->k << ','
            << format_double(hit->wall_time_s) << '\n';
      } else {
        table << std::setw(14) << "-" << std::setw(14) << "-";
        csv << name << ',' << format_double(e) << ",-,-\n";
      }
    }
    table << '\n';
  }
  std::cout << table.str();
  return 0;
}

int cmd_selftest() { return run_selftest() ? 0 : 1; }

}  // namespace proxcg
