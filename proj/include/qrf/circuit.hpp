#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrf {

enum class GateKind : std::uint8_t { RotationY, Cnot };

// One gate acting on a k-qubit register.  Qubit indices are 1-based
// (qubit 1 is the most significant factor of the tensor product).
struct Gate {
  GateKind kind = GateKind::RotationY;
  int qubit = 0;    // RotationY target
  double angle = 0.0;
  int control = 0;  // Cnot only
  int target = 0;   // Cnot only

  static Gate rotation_y(int qubit, double angle) {
    Gate g;
    g.kind = GateKind::RotationY;
    g.qubit = qubit;
    g.angle = angle;
    return g;
  }

  static Gate cnot(int control, int target) {
    Gate g;
    g.kind = GateKind::Cnot;
    g.control = control;
    g.target = target;
    return g;
  }
};

struct Circuit {
  int qubits = 0;
  std::vector<Gate> gates;  // applied left to right: gates[0] acts first

  explicit Circuit(int k = 0) : qubits(k) {
    if (k < 1 && k != 0) throw std::invalid_argument("Circuit: qubit count must be positive");
  }
};

inline void validate_gate(const Gate& g, int qubits) {
  if (g.kind == GateKind::RotationY) {
    if (g.qubit < 1 || g.qubit > qubits)
      throw std::out_of_range("gate qubit " + std::to_string(g.qubit) + " outside 1.." +
                              std::to_string(qubits));
  } else {
    if (g.control < 1 || g.control > qubits || g.target < 1 || g.target > qubits)
      throw std::out_of_range("cnot qubit outside 1.." + std::to_string(qubits));
    if (g.control == g.target)
      throw std::invalid_argument("cnot control and target must differ");
  }
}

inline void validate_circuit(const Circuit& c) {
  if (c.qubits < 1) throw std::invalid_argument("circuit has no qubits");
  for (const Gate& g : c.gates) validate_gate(g, c.qubits);
}

}  // namespace qrf
