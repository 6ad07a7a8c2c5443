#include "rteach/matrix.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace rteach {

namespace {

using EMat = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMap = Eigen::Map<const EMat>;
using MMap = Eigen::Map<EMat>;

CMap map(const Matrix& m) { return CMap(m.data.data(), m.rows, m.cols); }
MMap map(Matrix& m) { return MMap(m.data.data(), m.rows, m.cols); }

}  // namespace

bool Matrix::all_finite() const {
  for (float v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void matmul(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.cols != b.rows) throw DimensionError("matmul: inner dimensions differ");
  c.resize(a.rows, b.cols);
  map(c).noalias() = map(a) * map(b);
}

void matmul_tn(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.rows != b.rows) throw DimensionError("matmul_tn: inner dimensions differ");
  c.resize(a.cols, b.cols);
  map(c).noalias() = map(a).transpose() * map(b);
}

void matmul_nt(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.cols != b.cols) throw DimensionError("matmul_nt: inner dimensions differ");
  c.resize(a.rows, b.rows);
  map(c).noalias() = map(a) * map(b).transpose();
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c;
  matmul(a, b, c);
  return c;
}

}  // namespace rteach
