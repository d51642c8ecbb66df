// Minimal dense row-major matrix/vector types used throughout the model code.
#pragma once

#include <cstddef>
#include <vector>

#include "mcmd/common.hpp"

namespace mcmd {

using Vec = std::vector<double>;

struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

  double* row(int r) { return a.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const { return a.data() + static_cast<std::size_t>(r) * cols; }

  std::size_t size() const { return a.size(); }
  bool empty() const { return a.empty(); }
  void zero() { std::fill(a.begin(), a.end(), 0.0); }
};

inline bool same_shape(const Mat& x, const Mat& y) {
  return x.rows == y.rows && x.cols == y.cols;
}

}  // namespace mcmd
