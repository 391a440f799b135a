#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qrf/circuit.hpp"
#include "qrf/matrix.hpp"

namespace qrf {

// State of a k-qubit register.  The gate set used here (R_y rotations and
// CNOT) has purely real matrix entries, so amplitudes are plain doubles.
// Amplitude index i corresponds to the computational basis state whose
// bit (k - j) (counting from the least significant bit) holds the value
// of qubit j; equivalently qubit 1 selects the most significant bit.
struct StateVector {
  int qubits = 0;
  std::vector<double> amps;

  static StateVector zero_state(int k);                        // |0...0>
  static StateVector from_amplitudes(int k, std::span<const double> a,
                                     double norm_tol = 1e-9);  // must be unit norm
};

// 2x2 rotation matrix [[cos a, sin a], [-sin a, cos a]].
Matrix rotation_y_matrix(double angle);

// Apply one gate in place via strided index arithmetic: O(2^k) work,
// no matrix is ever materialised.
StateVector apply_gate(StateVector state, const Gate& g);

// Run all gates of the circuit, in order, starting from `input`.
StateVector run_circuit(const Circuit& c, StateVector input);

// Full 2^k x 2^k unitary of the circuit, built by multiplying embedded
// per-gate matrices.  Exponential in k; refuses k > 12.  Exists as an
// independent cross-check of apply_gate, not as a simulation path.
Matrix dense_unitary(const Circuit& c);

// First row of dense_unitary(c), computed in O(gates * 2^k) by running
// the inverse circuit on |0...0>:  row_0(U) = (U^t e_0)^t and, for this
// real gate set, U^t = U^{-1}.
std::vector<double> first_row_vector(const Circuit& c);

// <e_0 | U | input>: amplitude of the all-zeros state after the circuit.
double first_amplitude(const Circuit& c, const StateVector& input);

// Shot-noise estimate of first_amplitude: measuring the all-zeros outcome
// is a Bernoulli trial with success probability a^2, so draw a binomial
// count over `shots` trials and return sign(a) * sqrt(count/shots).
double estimate_first_amplitude(const Circuit& c, const StateVector& input, std::int64_t shots,
                                std::mt19937_64& eng);

}  // namespace qrf
