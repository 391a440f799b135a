#include "qrf/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrf {

StateVector StateVector::zero_state(int k) {
  if (k < 1) throw std::invalid_argument("zero_state: qubit count must be positive");
  StateVector s;
  s.qubits = k;
  s.amps.assign(std::size_t(1) << k, 0.0);
  s.amps[0] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(int k, std::span<const double> a, double norm_tol) {
  if (k < 1) throw std::invalid_argument("from_amplitudes: qubit count must be positive");
  const std::size_t dim = std::size_t(1) << k;
  if (a.size() != dim)
    throw std::invalid_argument("from_amplitudes: expected " + std::to_string(dim) +
                                " amplitudes, got " + std::to_string(a.size()));
  double sq = 0.0;
  for (double v : a) {
    if (!std::isfinite(v)) throw std::invalid_argument("from_amplitudes: non-finite amplitude");
    sq += v * v;
  }
  if (std::abs(std::sqrt(sq) - 1.0) > norm_tol)
    throw std::invalid_argument("from_amplitudes: state is not unit norm");
  StateVector s;
  s.qubits = k;
  s.amps.assign(a.begin(), a.end());
  return s;
}

Matrix rotation_y_matrix(double angle) {
  Matrix m(2, 2);
  const double c = std::cos(angle), s = std::sin(angle);
  m.at(0, 0) = c;
  m.at(0, 1) = s;
  m.at(1, 0) = -s;
  m.at(1, 1) = c;
  return m;
}

StateVector apply_gate(StateVector state, const Gate& g) {
  const int k = state.qubits;
  validate_gate(g, k);
  auto& a = state.amps;
  const std::size_t n = a.size();
  if (g.kind == GateKind::RotationY) {
    // Qubit j lives at bit position (k - j).  For every index with that
    // bit clear, mix the pair (i, i | mask) by the 2x2 rotation.
    const std::size_t mask = std::size_t(1) << (k - g.qubit);
    const double c = std::cos(g.angle), s = std::sin(g.angle);
    for (std::size_t i = 0; i < n; ++i) {
      if (i & mask) continue;
      const double a0 = a[i], a1 = a[i | mask];
      a[i] = c * a0 + s * a1;
      a[i | mask] = -s * a0 + c * a1;
    }
  } else {
    // CNOT: swap the target pair wherever the control bit is set.
    const std::size_t cmask = std::size_t(1) << (k - g.control);
    const std::size_t tmask = std::size_t(1) << (k - g.target);
    for (std::size_t i = 0; i < n; ++i) {
      if ((i & cmask) && !(i & tmask)) std::swap(a[i], a[i | tmask]);
    }
  }
  return state;
}

StateVector run_circuit(const Circuit& c, StateVector input) {
  validate_circuit(c);
  if (input.qubits != c.qubits)
    throw std::invalid_argument("run_circuit: state and circuit qubit counts differ");
  for (const Gate& g : c.gates) input = apply_gate(std::move(input), g);
  return input;
}

namespace {

// 2^k x 2^k embedding of a single gate.  Built from explicit Kronecker
// products / permutation action so that it shares no code with the
// strided apply_gate path.
Matrix embedded_gate_matrix(const Gate& g, int k) {
  const std::size_t dim = std::size_t(1) << k;
  if (g.kind == GateKind::RotationY) {
    Matrix m = identity_matrix(1 << (g.qubit - 1));
    m = kron(m, rotation_y_matrix(g.angle));
    return kron(m, identity_matrix(1 << (k - g.qubit)));
  }
  const std::size_t cmask = std::size_t(1) << (k - g.control);
  const std::size_t tmask = std::size_t(1) << (k - g.target);
  Matrix m(static_cast<int>(dim), static_cast<int>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    const std::size_t row = (col & cmask) ? (col ^ tmask) : col;
    m.at(static_cast<int>(row), static_cast<int>(col)) = 1.0;
  }
  return m;
}

Gate inverse_gate(const Gate& g) {
  if (g.kind == GateKind::RotationY) return Gate::rotation_y(g.qubit, -g.angle);
  return g;  // CNOT is an involution
}

}  // namespace

Matrix dense_unitary(const Circuit& c) {
  validate_circuit(c);
  if (c.qubits > 12)
    throw std::invalid_argument("dense_unitary: refusing k > 12 (matrix would be huge)");
  Matrix u = identity_matrix(1 << c.qubits);
  for (const Gate& g : c.gates) u = matmul(embedded_gate_matrix(g, c.qubits), u);
  return u;
}

std::vector<double> first_row_vector(const Circuit& c) {
  validate_circuit(c);
  StateVector s = StateVector::zero_state(c.qubits);
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it)
    s = apply_gate(std::move(s), inverse_gate(*it));
  return std::move(s.amps);
}

double first_amplitude(const Circuit& c, const StateVector& input) {
  const StateVector out = run_circuit(c, input);
  return out.amps[0];
}

double estimate_first_amplitude(const Circuit& c, const StateVector& input, std::int64_t shots,
                                std::mt19937_64& eng) {
  if (shots < 1) throw std::invalid_argument("estimate_first_amplitude: shots must be >= 1");
  const double a = first_amplitude(c, input);
  const double p = std::clamp(a * a, 0.0, 1.0);
  std::binomial_distribution<std::int64_t> trial(shots, p);
  const double phat = static_cast<double>(trial(eng)) / static_cast<double>(shots);
  const double mag = std::sqrt(phat);
  return a < 0.0 ? -mag : mag;
}

}  // namespace qrf
