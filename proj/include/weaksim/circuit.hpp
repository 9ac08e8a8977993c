#pragma once

#include <cctype>
#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace weaksim {

enum class GateKind { kH, kX, kS, kCZ, kCNOT, kToffoli, kCPhase, kPermute };

struct Gate {
  GateKind kind = GateKind::kH;
  int a = -1;  // target / first qubit
  int b = -1;  // control / second qubit
  int c = -1;  // second control (Toffoli)
  double theta = 0.0;
  // Bijective map on basis states, for classically-defined subroutines.
  std::shared_ptr<const std::vector<uint64_t>> permutation;
};

struct GateCircuit {
  int n_qubits = 0;
  std::vector<Gate> gates;
};

inline Gate make_gate(GateKind kind, int a = -1, int b = -1, int c = -1, double theta = 0.0) {
  Gate g;
  g.kind = kind;
  g.a = a;
  g.b = b;
  g.c = c;
  g.theta = theta;
  return g;
}

inline Gate make_h(int q) { return make_gate(GateKind::kH, q); }
inline Gate make_x(int q) { return make_gate(GateKind::kX, q); }
inline Gate make_s(int q) { return make_gate(GateKind::kS, q); }
inline Gate make_cz(int a, int b) { return make_gate(GateKind::kCZ, a, b); }
inline Gate make_cnot(int control, int target) { return make_gate(GateKind::kCNOT, target, control); }
inline Gate make_toffoli(int c1, int c2, int target) { return make_gate(GateKind::kToffoli, target, c1, c2); }
inline Gate make_cphase(double theta, int a, int b) { return make_gate(GateKind::kCPhase, a, b, -1, theta); }

inline void validate(const GateCircuit& circuit) {
  auto check = [&](int q) {
    if (q < 0 || q >= circuit.n_qubits) throw std::invalid_argument("gate touches qubit outside the register");
  };
  for (const Gate& g : circuit.gates) {
    switch (g.kind) {
      case GateKind::kH:
      case GateKind::kX:
      case GateKind::kS:
        check(g.a);
        break;
      case GateKind::kCZ:
      case GateKind::kCNOT:
      case GateKind::kCPhase:
        check(g.a);
        check(g.b);
        if (g.a == g.b) throw std::invalid_argument("two-qubit gate with equal qubits");
        break;
      case GateKind::kToffoli:
        check(g.a);
        check(g.b);
        check(g.c);
        if (g.a == g.b || g.a == g.c || g.b == g.c) throw std::invalid_argument("Toffoli with repeated qubits");
        break;
      case GateKind::kPermute:
        if (!g.permutation || g.permutation->size() != (size_t{1} << circuit.n_qubits))
          throw std::invalid_argument("permutation table has wrong size");
        break;
    }
  }
}

// Text format, one gate per line: "H 0", "X 2", "S 3", "CZ 0 1",
// "CNOT 0 1" (control first), "TOFFOLI 0 1 2" (controls first),
// "CPHASE 1.5708 0 1". Blank lines and lines starting with '#' are skipped.
// An optional "QUBITS n" line fixes the register width; otherwise it is
// one past the largest qubit index used.
inline GateCircuit parse_gate_list(std::istream& in) {
  GateCircuit circuit;
  int declared = -1;
  int max_qubit = -1;
  std::string line;
  auto track = [&](int q) {
    if (q < 0) throw std::invalid_argument("negative qubit index");
    if (q > max_qubit) max_qubit = q;
  };
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op) || op[0] == '#') continue;
    for (char& ch : op) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (op == "QUBITS") {
      if (!(ls >> declared) || declared <= 0) throw std::invalid_argument("bad QUBITS line");
      continue;
    }
    int a, b, c;
    double theta;
    if (op == "H" || op == "X" || op == "S") {
      if (!(ls >> a)) throw std::invalid_argument("bad gate line: " + line);
      track(a);
      circuit.gates.push_back(op == "H" ? make_h(a) : op == "X" ? make_x(a) : make_s(a));
    } else if (op == "CZ" || op == "CNOT") {
      if (!(ls >> a >> b)) throw std::invalid_argument("bad gate line: " + line);
      track(a);
      track(b);
      circuit.gates.push_back(op == "CZ" ? make_cz(a, b) : make_cnot(a, b));
    } else if (op == "TOFFOLI" || op == "CCX") {
      if (!(ls >> a >> b >> c)) throw std::invalid_argument("bad gate line: " + line);
      track(a);
      track(b);
      track(c);
      circuit.gates.push_back(make_toffoli(a, b, c));
    } else if (op == "CPHASE") {
      if (!(ls >> theta >> a >> b)) throw std::invalid_argument("bad gate line: " + line);
      track(a);
      track(b);
      circuit.gates.push_back(make_cphase(theta, a, b));
    } else {
      throw std::invalid_argument("unknown gate: " + op);
    }
  }
  circuit.n_qubits = declared > 0 ? declared : max_qubit + 1;
  if (circuit.n_qubits <= 0) throw std::invalid_argument("empty gate list with no QUBITS line");
  validate(circuit);
  return circuit;
}

inline void format_gate_list(const GateCircuit& circuit, std::ostream& out) {
  out << "QUBITS " << circuit.n_qubits << "\n";
  for (const Gate& g : circuit.gates) {
    switch (g.kind) {
      case GateKind::kH: out << "H " << g.a << "\n"; break;
      case GateKind::kX: out << "X " << g.a << "\n"; break;
      case GateKind::kS: out << "S " << g.a << "\n"; break;
      case GateKind::kCZ: out << "CZ " << g.a << " " << g.b << "\n"; break;
      case GateKind::kCNOT: out << "CNOT " << g.b << " " << g.a << "\n"; break;
      case GateKind::kToffoli: out << "TOFFOLI " << g.b << " " << g.c << " " << g.a << "\n"; break;
      case GateKind::kCPhase: out << "CPHASE " << g.theta << " " << g.a << " " << g.b << "\n"; break;
      case GateKind::kPermute: throw std::invalid_argument("permutation gates have no text form");
    }
  }
}

}  // namespace weaksim
