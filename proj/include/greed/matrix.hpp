#pragma once

#include <cstddef>
#include <vector>

namespace greed {

using Vec = std::vector<double>;

// Dense row-major matrix, rows x cols.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }
  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }

  // y = M x
  Vec apply(const Vec& x) const {
    Vec y(static_cast<std::size_t>(rows), 0.0);
    for (int r = 0; r < rows; ++r) {
      const double* w = row(r);
      double acc = 0.0;
      for (int c = 0; c < cols; ++c) acc += w[c] * x[c];
      y[r] = acc;
    }
    return y;
  }

  // y = M^T g
  Vec apply_transposed(const Vec& g) const {
    Vec y(static_cast<std::size_t>(cols), 0.0);
    for (int r = 0; r < rows; ++r) {
      const double* w = row(r);
      const double gr = g[r];
      for (int c = 0; c < cols; ++c) y[c] += w[c] * gr;
    }
    return y;
  }

  // M += scale * g x^T
  void add_outer(const Vec& g, const Vec& x, double scale = 1.0) {
    for (int r = 0; r < rows; ++r) {
      double* w = row(r);
      const double gr = g[r] * scale;
      for (int c = 0; c < cols; ++c) w[c] += gr * x[c];
    }
  }

  void add_scaled(const Matrix& other, double scale) {
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += scale * other.data[i];
  }

  void fill(double v) {
    for (auto& x : data) x = v;
  }
};

}  // namespace greed
