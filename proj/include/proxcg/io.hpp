#pragma once

#include <string>
#include <vector>

#include "proxcg/solvers.hpp"
#include "proxcg/types.hpp"

namespace proxcg {

/// Comma-separated rows, decimal floats, no header.
void save_csv_matrix(const std::string& path, const Matrix& M);
Matrix load_csv_matrix(const std::string& path);

extern const char* const kTraceHeader;

void save_trace_csv(const std::string& path, const std::vector<IterateRecord>& trace);
std::vector<IterateRecord> load_trace_csv(const std::string& path);

std::string format_double(double v);

}  // namespace proxcg
