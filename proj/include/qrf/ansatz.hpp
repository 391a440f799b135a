#pragma once

#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qrf/circuit.hpp"
#include "qrf/matrix.hpp"

namespace qrf {

// Hyper-parameters of the random circuit family and of basis sampling.
struct AnsatzParams {
  int qubits = 7;           // k: register size, feature dimension is 2^k
  int layers = 14;          // L: entangling layers after the initial rotations
  int basis_size = 8000;    // D: number of basis vectors to sample
  double rot_mean = 0.5 * std::numbers::pi;  // mean of every rotation angle
  double rot_std = 0.1;     // std dev of every rotation angle
  double weight_std = 1.0;  // std dev of the scalar weight (mean is fixed at 1)
  std::uint64_t seed = 1;
};

void validate(const AnsatzParams& p);

// A sampled random-feature basis.  Column i of `vectors` is
// g_i = w_i * u_i where u_i is the first row of the i-th circuit's
// unitary (a unit vector) and w_i a scalar weight.  The circuits are kept
// so mapped features can later be recomputed through the simulator.
struct FeatureBasis {
  int dim = 0;                    // 2^qubits
  Matrix vectors;                 // dim x basis_size
  std::vector<double> weights;    // basis_size
  std::vector<Circuit> circuits;  // basis_size

  int size() const { return vectors.cols; }
  std::uint64_t fingerprint() const;  // FNV-1a over vectors and weights
};

// One random circuit: k initial rotations (one per qubit), then per layer
// a uniformly chosen ordered qubit pair receiving a rotation on the
// target, a rotation on the control, and a CNOT.  All angles are drawn
// i.i.d. normal(rot_mean, rot_std); draws happen in gate order.
Circuit sample_circuit(const AnsatzParams& p, std::mt19937_64& eng);

// Sample the whole basis.  Basis vector i is derived entirely from
// substream i of p.seed, so the result is identical whether columns are
// filled in parallel (sample_basis) or one by one (sample_basis_serial).
FeatureBasis sample_basis(const AnsatzParams& p);
FeatureBasis sample_basis_serial(const AnsatzParams& p);

// Versioned little-endian binary snapshot of a basis.
void save_basis(const FeatureBasis& basis, const std::string& path);
FeatureBasis load_basis(const std::string& path);

}  // namespace qrf
