#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace proxcg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Flat real vector of dimension n. Matrix-shaped variables are flattened
// column-major; the owning problem keeps the shape metadata.
using Point = Vector;

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline void require_finite(const Eigen::Ref<const Vector>& v, const char* what) {
  if (!v.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

}  // namespace proxcg
