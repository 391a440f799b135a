#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrf {

// Dense column-major matrix of doubles.  Columns are the "unit of data"
// throughout this codebase (one column per data point, per basis vector,
// per mapped feature vector), so iterating a single column touches
// contiguous memory.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // size rows*cols, column-major

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {
    if (r < 0 || c < 0) throw std::invalid_argument("Matrix: negative dimension");
  }

  double& at(int r, int c) { return data[static_cast<std::size_t>(c) * rows + r]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(c) * rows + r]; }

  double* col(int c) { return data.data() + static_cast<std::size_t>(c) * rows; }
  const double* col(int c) const { return data.data() + static_cast<std::size_t>(c) * rows; }

  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

inline double dot(const double* a, const double* b, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

// C = A * B, naive triple loop ordered for column-major access.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: inner dimensions disagree");
  Matrix c(a.rows, b.cols);
  for (int j = 0; j < b.cols; ++j) {
    const double* bj = b.col(j);
    double* cj = c.col(j);
    for (int l = 0; l < a.cols; ++l) {
      const double blj = bj[l];
      if (blj == 0.0) continue;
      const double* al = a.col(l);
      for (int i = 0; i < a.rows; ++i) cj[i] += al[i] * blj;
    }
  }
  return c;
}

inline Matrix identity_matrix(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

// Kronecker product a (x) b.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows * b.rows, a.cols * b.cols);
  for (int ja = 0; ja < a.cols; ++ja)
    for (int ia = 0; ia < a.rows; ++ia) {
      const double v = a.at(ia, ja);
      if (v == 0.0) continue;
      for (int jb = 0; jb < b.cols; ++jb)
        for (int ib = 0; ib < b.rows; ++ib)
          c.at(ia * b.rows + ib, ja * b.cols + jb) = v * b.at(ib, jb);
    }
  return c;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] > b.data[i] ? a.data[i] - b.data[i] : b.data[i] - a.data[i];
    if (d > m) m = d;
  }
  return m;
}

}  // namespace qrf
