#pragma once

#include <cstddef>
#include <vector>

#include "rteach/common.hpp"

namespace rteach {

// Dense row-major single-precision matrix. Values only, no views.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<float> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(size_t(r) * size_t(c), 0.0f) {
    if (r < 0 || c < 0) throw DimensionError("negative matrix dimension");
  }

  static Matrix zeros(int r, int c) { return Matrix(r, c); }

  // Resize without preserving contents; keeps capacity when shrinking.
  void resize(int r, int c) {
    rows = r;
    cols = c;
    data.resize(size_t(r) * size_t(c));
  }

  void fill(float v) { std::fill(data.begin(), data.end(), v); }

  float& at(int r, int c) { return data[size_t(r) * cols + c]; }
  float at(int r, int c) const { return data[size_t(r) * cols + c]; }

  float* row_ptr(int r) { return data.data() + size_t(r) * cols; }
  const float* row_ptr(int r) const { return data.data() + size_t(r) * cols; }

  size_t size() const { return data.size(); }
  bool all_finite() const;
};

// c = a * b
void matmul(const Matrix& a, const Matrix& b, Matrix& c);
// c = a^T * b
void matmul_tn(const Matrix& a, const Matrix& b, Matrix& c);
// c = a * b^T
void matmul_nt(const Matrix& a, const Matrix& b, Matrix& c);

Matrix matmul(const Matrix& a, const Matrix& b);

}  // namespace rteach
