#include "proxcg/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace proxcg {

const char* const kTraceHeader = "k,f,gradmap_norm,tau_k,tau_tilde,mu_star,cg_steps,hvp_count,wall_time_s";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_csv_matrix(const std::string& path, const Matrix& M) {
  std::ofstream out(path);
  require(out.good(), "save_csv_matrix: cannot open " + path);
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out << ',';
      out << format_double(M(i, j));
    }
    out << '\n';
  }
  require(out.good(), "save_csv_matrix: write failed for " + path);
}

Matrix load_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "load_csv_matrix: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty())
      require(row.size() == rows.front().size(), "load_csv_matrix: ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), "load_csv_matrix: empty file " + path);
  Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      M(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return M;
}

void save_trace_csv(const std::string& path, const std::vector<IterateRecord>& trace) {
  std::ofstream out(path);
  require(out.good(), "save_trace_csv: cannot open " + path);
  out << kTraceHeader << '\n';
  for (const IterateRecord& r : trace) {
    out << r.k << ',' << format_double(r.f) << ',' << format_double(r.gradmap_norm) << ','
        << format_double(r.tau_k) << ',' << format_double(r.tau_tilde) << ','
        << format_double(r.mu_star) << ',' << r.cg_steps << ',' << r.hvp_count << ','
        << format_double(r.wall_time_s) << '\n';
  }
  require(out.good(), "save_trace_csv: write failed for " + path);
}

std::vector<IterateRecord> load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "load_trace_csv: cannot open " + path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "load_trace_csv: empty file " + path);
  require(line == kTraceHeader, "load_trace_csv: unexpected header in " + path);
  std::vector<IterateRecord> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    require(cells.size() == 9, "load_trace_csv: bad row in " + path);
    IterateRecord r;
    r.k = std::stoi(cells[0]);
    r.f = std::stod(cells[1]);
    r.gradmap_norm = std::stod(cells[2]);
    r.tau_k = std::stod(cells[3]);
    r.tau_tilde = std::stod(cells[4]);
    r.mu_star = std::stod(cells[5]);
    r.cg_steps = std::stol(cells[6]);
    r.hvp_count = std::stol(cells[7]);
    r.wall_time_s = std::stod(cells[8]);
    trace.push_back(r);
  }
  return trace;
}

}  // namespace proxcg
