#pragma once

#include <cstdint>
#include <stdexcept>

#include "weaksim/circuit.hpp"
#include "weaksim/random.hpp"

namespace weaksim {

// An HT circuit is a layer of Hadamards on distinct qubits followed by
// classical reversible gates only (X, CNOT, Toffoli). Measuring it is
// equivalent to flipping one coin per Hadamard and propagating the bits
// through the classical gates.
inline bool is_ht_circuit(const GateCircuit& circuit) {
  if (circuit.n_qubits < 1 || circuit.n_qubits > 62) return false;
  uint64_t h_seen = 0;
  size_t i = 0;
  for (; i < circuit.gates.size() && circuit.gates[i].kind == GateKind::kH; ++i) {
    const uint64_t m = uint64_t{1} << circuit.gates[i].a;
    if (h_seen & m) return false;  // repeated H is not a layer on a subset
    h_seen |= m;
  }
  for (; i < circuit.gates.size(); ++i) {
    const GateKind k = circuit.gates[i].kind;
    if (k != GateKind::kX && k != GateKind::kCNOT && k != GateKind::kToffoli) return false;
  }
  return true;
}

// One sample of the measured HT circuit; bit a of the result is qubit a.
inline uint64_t ht_sample(const GateCircuit& circuit, RandomSource& rng) {
  validate(circuit);
  if (!is_ht_circuit(circuit)) throw std::invalid_argument("ht_sample: circuit is not in HT shape");
  uint64_t bits = 0;
  size_t i = 0;
  for (; i < circuit.gates.size() && circuit.gates[i].kind == GateKind::kH; ++i)
    if (rng.coin()) bits |= uint64_t{1} << circuit.gates[i].a;
  for (; i < circuit.gates.size(); ++i) {
    const Gate& g = circuit.gates[i];
    switch (g.kind) {
      case GateKind::kX:
        bits ^= uint64_t{1} << g.a;
        break;
      case GateKind::kCNOT:
        if (bits >> g.b & 1) bits ^= uint64_t{1} << g.a;
        break;
      case GateKind::kToffoli:
        if ((bits >> g.b & 1) && (bits >> g.c & 1)) bits ^= uint64_t{1} << g.a;
        break;
      default:
        throw std::invalid_argument("ht_sample: unexpected gate");
    }
  }
  return bits;
}

}  // namespace weaksim
