#include "qrf/featmap.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qrf/rng.hpp"
#include "qrf/statevector.hpp"

namespace qrf {

Matrix pad_rows(const Matrix& points, int rows) {
  if (rows < points.rows)
    throw std::invalid_argument("pad_rows: target row count smaller than input");
  if (rows == points.rows) return points;
  Matrix out(rows, points.cols);
  for (int j = 0; j < points.cols; ++j) {
    const double* src = points.col(j);
    double* dst = out.col(j);
    for (int i = 0; i < points.rows; ++i) dst[i] = src[i];
  }
  return out;
}

NormalizedPoints normalize_points(const Matrix& points) {
  NormalizedPoints np;
  np.points = points;
  np.norms.resize(static_cast<std::size_t>(points.cols));
  for (int j = 0; j < points.cols; ++j) {
    double* col = np.points.col(j);
    double sq = 0.0;
    for (int i = 0; i < points.rows; ++i) sq += col[i] * col[i];
    const double norm = std::sqrt(sq);
    np.norms[static_cast<std::size_t>(j)] = norm;
    if (norm > 0.0)
      for (int i = 0; i < points.rows; ++i) col[i] /= norm;
  }
  return np;
}

namespace {

void check_map_dims(const Matrix& basis_vectors, const Matrix& points) {
  if (basis_vectors.rows != points.rows)
    throw std::invalid_argument("map_dataset: basis dimension " +
                                std::to_string(basis_vectors.rows) + " != point dimension " +
                                std::to_string(points.rows));
  if (basis_vectors.cols < 1) throw std::invalid_argument("map_dataset: empty basis");
}

// Map one point: out[0..D) = scale*cos(b_i), out[D..2D) = scale*sin(b_i).
inline void map_point(const Matrix& basis, const double* f, double* out) {
  const int d = basis.rows, D = basis.cols;
  const double scale = std::sqrt(1.0 / D);
  for (int i = 0; i < D; ++i) {
    const double b = dot(basis.col(i), f, d);
    out[i] = scale * std::cos(b);
    out[D + i] = scale * std::sin(b);
  }
}

double column_norm(const double* p, int n) {
  double sq = 0.0;
  for (int i = 0; i < n; ++i) sq += p[i] * p[i];
  return std::sqrt(sq);
}

}  // namespace

MappedFeatures map_dataset_serial(const Matrix& basis_vectors, const Matrix& points) {
  check_map_dims(basis_vectors, points);
  MappedFeatures mf;
  mf.features = Matrix(2 * basis_vectors.cols, points.cols);
  mf.norms.resize(static_cast<std::size_t>(points.cols));
  for (int j = 0; j < points.cols; ++j) {
    map_point(basis_vectors, points.col(j), mf.features.col(j));
    mf.norms[static_cast<std::size_t>(j)] = column_norm(points.col(j), points.rows);
  }
  return mf;
}

MappedFeatures map_dataset(const Matrix& basis_vectors, const Matrix& points) {
  check_map_dims(basis_vectors, points);
  MappedFeatures mf;
  mf.features = Matrix(2 * basis_vectors.cols, points.cols);
  mf.norms.resize(static_cast<std::size_t>(points.cols));
  // Each point is independent, so a static split over points yields the
  // same values as the serial loop no matter how many threads run.
#pragma omp parallel for schedule(static)
  for (int j = 0; j < points.cols; ++j) {
    map_point(basis_vectors, points.col(j), mf.features.col(j));
    mf.norms[static_cast<std::size_t>(j)] = column_norm(points.col(j), points.rows);
  }
  return mf;
}

MappedFeatures map_dataset_via_circuits(const FeatureBasis& basis, const Matrix& points,
                                        std::int64_t shots, std::uint64_t seed) {
  if (basis.dim != points.rows)
    throw std::invalid_argument("map_dataset_via_circuits: point dimension must equal 2^qubits");
  if (static_cast<int>(basis.circuits.size()) != basis.size())
    throw std::invalid_argument("map_dataset_via_circuits: basis carries no circuits");
  if (shots < 0) throw std::invalid_argument("map_dataset_via_circuits: shots must be >= 0");
  const int D = basis.size(), n = points.cols;
  int qubits = 0;
  while ((1 << qubits) < basis.dim) ++qubits;
  MappedFeatures mf;
  mf.features = Matrix(2 * D, n);
  mf.norms.resize(static_cast<std::size_t>(n));
  const double scale = std::sqrt(1.0 / D);
  std::vector<double> unit(static_cast<std::size_t>(basis.dim));
  for (int j = 0; j < n; ++j) {
    const double* f = points.col(j);
    const double norm = column_norm(f, basis.dim);
    mf.norms[static_cast<std::size_t>(j)] = norm;
    double* out = mf.features.col(j);
    if (norm == 0.0) {
      // <g, 0> = 0 for every basis vector; no state to prepare.
      for (int i = 0; i < D; ++i) {
        out[i] = scale;
        out[D + i] = 0.0;
      }
      continue;
    }
    for (int r = 0; r < basis.dim; ++r) unit[static_cast<std::size_t>(r)] = f[r] / norm;
    const StateVector state = StateVector::from_amplitudes(qubits, unit);
    for (int i = 0; i < D; ++i) {
      const Circuit& circ = basis.circuits[static_cast<std::size_t>(i)];
      double amp;
      if (shots > 0) {
        auto eng = make_engine(substream_seed(
            seed, static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(D) +
                      static_cast<std::uint64_t>(i)));
        amp = estimate_first_amplitude(circ, state, shots, eng);
      } else {
        amp = first_amplitude(circ, state);
      }
      const double b = basis.weights[static_cast<std::size_t>(i)] * amp * norm;
      out[i] = scale * std::cos(b);
      out[D + i] = scale * std::sin(b);
    }
  }
  return mf;
}

Matrix sample_gaussian_basis(int dim, int count, double gamma, std::uint64_t seed) {
  if (dim < 1 || count < 1)
    throw std::invalid_argument("sample_gaussian_basis: dim and count must be >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("sample_gaussian_basis: gamma must be finite and > 0");
  Matrix g(dim, count);
  for (int i = 0; i < count; ++i) {
    auto eng = make_engine(substream_seed(seed, static_cast<std::uint64_t>(i)));
    std::normal_distribution<double> dist(0.0, gamma);
    double* col = g.col(i);
    for (int r = 0; r < dim; ++r) col[r] = dist(eng);
  }
  return g;
}

double approx_kernel(std::span<const double> f1, std::span<const double> f2,
                     const Matrix& basis_vectors) {
  const int d = basis_vectors.rows, D = basis_vectors.cols;
  if (static_cast<int>(f1.size()) != d || static_cast<int>(f2.size()) != d)
    throw std::invalid_argument("approx_kernel: point dimension mismatch");
  if (D < 1) throw std::invalid_argument("approx_kernel: empty basis");
  double acc = 0.0, acc_feat = 0.0;
  for (int i = 0; i < D; ++i) {
    const double* g = basis_vectors.col(i);
    const double b1 = dot(g, f1.data(), d);
    const double b2 = dot(g, f2.data(), d);
    acc += std::cos(b1 - b2);
    acc_feat += std::cos(b1) * std::cos(b2) + std::sin(b1) * std::sin(b2);
  }
  const double k = acc / D;
  // cos(b1 - b2) == cos b1 cos b2 + sin b1 sin b2: the Monte-Carlo value
  // must equal the mapped-feature inner product it stands for.
  if (std::abs(k - acc_feat / D) > 1e-9)
    throw std::logic_error("approx_kernel: trig identity violated");
  return k;
}

}  // namespace qrf
