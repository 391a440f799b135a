#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrf/ansatz.hpp"
#include "qrf/matrix.hpp"

namespace qrf {

// Random Fourier features of a dataset.  Column j holds
//   sqrt(1/D) * (cos(b_1j), ..., cos(b_Dj), sin(b_1j), ..., sin(b_Dj))
// with b_ij = <g_i, f_j>, so features.rows == 2 * D.
struct MappedFeatures {
  Matrix features;
  std::vector<double> norms;  // Euclidean norm of each input point
};

// Append zero rows so points of dimension d can be fed to a basis living
// in dimension rows >= d.
Matrix pad_rows(const Matrix& points, int rows);

// Columns scaled to unit Euclidean norm, with the original norms kept so
// inner products can be rescaled afterwards.  All-zero columns stay zero
// and record norm 0.
struct NormalizedPoints {
  Matrix points;
  std::vector<double> norms;
};
NormalizedPoints normalize_points(const Matrix& points);

// Direct evaluation of the map through inner products with the basis
// vectors (columns of basis_vectors).  map_dataset parallelises over
// points; map_dataset_serial is the reference implementation the tests
// compare against.  Both produce bit-identical output.
MappedFeatures map_dataset(const Matrix& basis_vectors, const Matrix& points);
MappedFeatures map_dataset_serial(const Matrix& basis_vectors, const Matrix& points);

// Evaluation through the circuit simulator: each point is normalised to a
// unit statevector, each b_ij is reassembled as
// weight_i * <first row of U_i, f_j/|f_j|> * |f_j|.  With shots > 0 the
// amplitude is replaced by its finite-shot estimate (seeded per (i, j)).
MappedFeatures map_dataset_via_circuits(const FeatureBasis& basis, const Matrix& points,
                                        std::int64_t shots, std::uint64_t seed);

// Classical baseline: columns i.i.d. normal(0, gamma^2) in each entry,
// the standard random-Fourier basis for the Gaussian kernel
// exp(-gamma^2 |f1 - f2|^2 / 2).
Matrix sample_gaussian_basis(int dim, int count, double gamma, std::uint64_t seed);

// Monte-Carlo kernel value (1/D) * sum_i cos(<g_i, f1> - <g_i, f2>).
// Equals the inner product of the two mapped feature vectors; the
// implementation evaluates both forms and insists they agree.
double approx_kernel(std::span<const double> f1, std::span<const double> f2,
                     const Matrix& basis_vectors);

}  // namespace qrf
