#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "weaksim/circuit.hpp"
#include "weaksim/random.hpp"

namespace weaksim {

// Destabilizer/stabilizer tableau over one 64-bit word per Pauli row: rows
// 0..n-1 hold destabilizer generators, rows n..2n-1 stabilizer generators,
// row 2n is scratch for deterministic measurements. Bit a of x_/z_ is the
// X/Z component on qubit a; r_ holds the sign bit. Gate updates and
// measurement follow the standard binary-symplectic rules; a full-register
// measurement is a qubit-by-qubit sequence of single measurements, which
// samples the exact joint outcome law.
class StabilizerTableau {
 public:
  explicit StabilizerTableau(int n) : n_(n) {
    if (n < 1 || n > 64) throw std::invalid_argument("StabilizerTableau: qubit count must be in [1, 64]");
    x_.assign(2 * static_cast<size_t>(n) + 1, 0);
    z_.assign(2 * static_cast<size_t>(n) + 1, 0);
    r_.assign(2 * static_cast<size_t>(n) + 1, 0);
    for (int i = 0; i < n; ++i) {
      x_[i] = uint64_t{1} << i;            // destabilizer X_i
      z_[n + i] = uint64_t{1} << i;        // stabilizer Z_i: the |0...0> state
    }
  }

  int n_qubits() const { return n_; }

  void apply_h(int a) {
    const uint64_t m = mask(a);
    for (size_t i = 0; i < rows(); ++i) {
      r_[i] ^= static_cast<uint8_t>(((x_[i] & z_[i] & m) != 0));
      const uint64_t xa = x_[i] & m, za = z_[i] & m;
      x_[i] = (x_[i] & ~m) | za;
      z_[i] = (z_[i] & ~m) | xa;
    }
  }

  void apply_s(int a) {
    const uint64_t m = mask(a);
    for (size_t i = 0; i < rows(); ++i) {
      r_[i] ^= static_cast<uint8_t>(((x_[i] & z_[i] & m) != 0));
      z_[i] ^= x_[i] & m;
    }
  }

  void apply_cnot(int control, int target) {
    if (control == target) throw std::invalid_argument("StabilizerTableau: CNOT needs distinct qubits");
    const uint64_t mc = mask(control), mt = mask(target);
    for (size_t i = 0; i < rows(); ++i) {
      const bool xc = x_[i] & mc, zc = z_[i] & mc;
      const bool xt = x_[i] & mt, zt = z_[i] & mt;
      r_[i] ^= static_cast<uint8_t>(xc && zt && (xt == zc));
      if (xc) x_[i] ^= mt;
      if (zt) z_[i] ^= mc;
    }
  }

  // Applies one gate from the {H, S, CNOT} generating set.
  void apply(const Gate& g) {
    switch (g.kind) {
      case GateKind::kH:
        apply_h(g.a);
        break;
      case GateKind::kS:
        apply_s(g.a);
        break;
      case GateKind::kCNOT:
        apply_cnot(g.b, g.a);
        break;
      default:
        throw std::invalid_argument("StabilizerTableau: gate outside the Clifford generating set");
    }
  }

  // Measures qubit a in the computational basis, collapsing the state.
  int measure(int a, RandomSource& rng) {
    if (a < 0 || a >= n_) throw std::invalid_argument("StabilizerTableau: qubit index out of range");
    const uint64_t m = mask(a);
    const size_t n = static_cast<size_t>(n_);
    size_t p = 2 * n;
    for (size_t i = n; i < 2 * n; ++i) {
      if (x_[i] & m) {
        p = i;
        break;
      }
    }
    if (p < 2 * n) {
      // outcome random: some stabilizer anticommutes with Z_a
      for (size_t i = 0; i < 2 * n; ++i)
        if (i != p && (x_[i] & m)) rowsum(i, p);
      x_[p - n] = x_[p];
      z_[p - n] = z_[p];
      r_[p - n] = r_[p];
      x_[p] = 0;
      z_[p] = m;
      r_[p] = rng.coin() ? 1 : 0;
      return r_[p];
    }
    // outcome determined: accumulate the matching stabilizers in scratch
    x_[2 * n] = 0;
    z_[2 * n] = 0;
    r_[2 * n] = 0;
    for (size_t i = 0; i < n; ++i)
      if (x_[i] & m) rowsum(2 * n, i + n);
    return r_[2 * n];
  }

  // Measures every qubit in index order; bit a of the result is qubit a.
  uint64_t measure_all(RandomSource& rng) {
    uint64_t out = 0;
    for (int a = 0; a < n_; ++a) out |= static_cast<uint64_t>(measure(a, rng)) << a;
    return out;
  }

  // Symplectic pairing of the generator rows: destabilizer i must
  // anticommute with stabilizer i and commute with every other row.
  bool check_invariants() const {
    const size_t n = static_cast<size_t>(n_);
    for (size_t i = 0; i < 2 * n; ++i) {
      for (size_t j = i + 1; j < 2 * n; ++j) {
        const int sym = (std::popcount(x_[i] & z_[j]) ^ std::popcount(z_[i] & x_[j])) & 1;
        const int expected = (j == i + n) ? 1 : 0;
        if (sym != expected) return false;
      }
    }
    return true;
  }

 private:
  size_t rows() const { return 2 * static_cast<size_t>(n_) + 1; }

  uint64_t mask(int a) const {
    if (a < 0 || a >= n_) throw std::invalid_argument("StabilizerTableau: qubit index out of range");
    return uint64_t{1} << a;
  }

  // Row h := row h * row i as Pauli group elements; the sign works out to
  // 2 r_h + 2 r_i + sum_a g_a = 0 or 2 (mod 4), with g_a the exponent of the
  // imaginary unit contributed by multiplying the one-qubit components.
  void rowsum(size_t h, size_t i) {
    const uint64_t x1 = x_[i], z1 = z_[i], x2 = x_[h], z2 = z_[h];
    const uint64_t plus = (x1 & z1 & z2 & ~x2) | (x1 & ~z1 & x2 & z2) | (~x1 & z1 & x2 & ~z2);
    const uint64_t minus = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & z2 & ~x2) | (~x1 & z1 & x2 & z2);
    const int64_t total =
        2 * (r_[h] + r_[i]) + std::popcount(plus) - std::popcount(minus);
    r_[h] = static_cast<uint8_t>(((total % 4) + 4) % 4 == 2);
    x_[h] ^= x1;
    z_[h] ^= z1;
  }

  int n_;
  std::vector<uint64_t> x_, z_;
  std::vector<uint8_t> r_;
};

// Evolves |0...0> through a {H, S, CNOT} gate list.
inline StabilizerTableau evolve_clifford(const GateCircuit& circuit) {
  validate(circuit);
  StabilizerTableau tab(circuit.n_qubits);
  for (const Gate& g : circuit.gates) tab.apply(g);
  return tab;
}

// One full-register sample of the measured Clifford circuit.
inline uint64_t clifford_sample(const GateCircuit& circuit, RandomSource& rng) {
  StabilizerTableau tab = evolve_clifford(circuit);
  return tab.measure_all(rng);
}

}  // namespace weaksim
