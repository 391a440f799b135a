#pragma once

// Brute-force reference implementations for the unit tests.  Each embedded
// gate matrix is built entrywise from bit arithmetic and the chain is
// combined with a plain triple-loop product, deliberately sharing no code
// with the library's stride-based and Kronecker-based paths.

#include <cmath>
#include <cstddef>
#include <vector>

#include "qrf/circuit.hpp"

namespace oracle {

using Mat = std::vector<std::vector<double>>;  // row-major, m[row][col]

inline Mat identity(std::size_t n) {
  Mat m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

// Full 2^k x 2^k matrix of a single gate.  Qubit j occupies bit (k - j)
// of the basis index, counting from the least significant bit.
inline Mat gate_matrix(const qrf::Gate& g, int k) {
  const std::size_t n = std::size_t(1) << k;
  Mat m(n, std::vector<double>(n, 0.0));
  if (g.kind == qrf::GateKind::RotationY) {
    const std::size_t bit = std::size_t(1) << (k - g.qubit);
    const double c = std::cos(g.angle), s = std::sin(g.angle);
    for (std::size_t row = 0; row < n; ++row)
      for (std::size_t col = 0; col < n; ++col) {
        if ((row | bit) != (col | bit)) continue;  // must agree off the acting bit
        const bool rb = (row & bit) != 0, cb = (col & bit) != 0;
        // 2x2 block [[cos, sin], [-sin, cos]] indexed by (row bit, col bit).
        m[row][col] = !rb ? (!cb ? c : s) : (!cb ? -s : c);
      }
  } else {
    const std::size_t cbit = std::size_t(1) << (k - g.control);
    const std::size_t tbit = std::size_t(1) << (k - g.target);
    for (std::size_t col = 0; col < n; ++col) {
      const std::size_t row = (col & cbit) ? (col ^ tbit) : col;
      m[row][col] = 1.0;
    }
  }
  return m;
}

inline Mat multiply(const Mat& a, const Mat& b) {
  const std::size_t n = a.size();
  Mat c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) acc += a[i][l] * b[l][j];
      c[i][j] = acc;
    }
  return c;
}

// U = M_last * ... * M_first: gates listed first act first.
inline Mat circuit_matrix(const qrf::Circuit& c) {
  Mat u = identity(std::size_t(1) << c.qubits);
  for (const qrf::Gate& g : c.gates) u = multiply(gate_matrix(g, c.qubits), u);
  return u;
}

inline std::vector<double> apply(const Mat& m, const std::vector<double>& v) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

inline double max_orthogonality_defect(const Mat& m) {
  const std::size_t n = m.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) acc += m[l][i] * m[l][j];  // (M^T M)_{ij}
      const double want = i == j ? 1.0 : 0.0;
      const double d = std::abs(acc - want);
      if (d > worst) worst = d;
    }
  return worst;
}

}  // namespace oracle
