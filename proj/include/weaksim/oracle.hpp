#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "weaksim/circuit.hpp"
#include "weaksim/distribution.hpp"
#include "weaksim/numtheory.hpp"
#include "weaksim/random.hpp"

namespace weaksim {

// Period-finding circuit: x register of n_x qubits in uniform superposition,
// f register of n_f qubits holding a^x mod N, Fourier transform on the x
// register, both registers measured. Outcome index packs x_tilde in the high
// n_x bits and f in the low n_f bits.
struct ShorPeriodSpec {
  uint64_t a = 0;
  uint64_t N = 1;
  int n_x = 1;
  int n_f = 0;  // 0: smallest width holding every f value
};

// The same circuit preceded by a modulus register: N uniform on
// {1, ..., 2^n_N} (prepared factored by the sampler side), then the
// period-finding circuit for a mod N. Outcome index packs (N mod 2^n_N) in
// the top n_N bits, then x_tilde, then f. a is reduced mod N per branch.
struct ShorSuperposedNSpec {
  uint64_t a = 0;
  int n_N = 1;
  int n_x = 1;
  int n_f = 0;  // 0: n_N
};

// Shortened Grover circuit: H^n, then t rounds of
// [oracle sign flip, H^n, sign flip at 0, H^n], all qubits measured.
// f[x] is +1 or -1.
struct GroverSpec {
  int n_qubits = 1;
  int64_t t = 0;
  std::vector<int8_t> f;
};

inline GroverSpec grover_marked(int n_qubits, int64_t t, uint64_t x0) {
  if (n_qubits < 1 || n_qubits > 30) throw std::invalid_argument("grover_marked: bad qubit count");
  if (x0 >> n_qubits) throw std::invalid_argument("grover_marked: x0 out of range");
  GroverSpec g{n_qubits, t, std::vector<int8_t>(size_t{1} << n_qubits, 1)};
  g.f[x0] = -1;
  return g;
}

using CircuitSpec = std::variant<ShorPeriodSpec, ShorSuperposedNSpec, GroverSpec, GateCircuit>;

// Dense-simulation width limit; QIS_ORACLE_CAP overrides the default of 24.
inline int oracle_qubit_cap() {
  if (const char* env = std::getenv("QIS_ORACLE_CAP")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 30) return static_cast<int>(v);
  }
  return 24;
}

namespace detail {

inline void check_cap(int qubits) {
  const int cap = oracle_qubit_cap();
  if (qubits > cap)
    throw std::runtime_error("oracle: " + std::to_string(qubits) + " qubits exceeds cap " + std::to_string(cap));
  if (qubits < 1) throw std::invalid_argument("oracle: empty register");
}

inline void hadamard_axis(std::vector<std::complex<double>>& amp, int qubit) {
  const size_t bit = size_t{1} << qubit;
  const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
  for (size_t base = 0; base < amp.size(); base += 2 * bit)
    for (size_t i = base; i < base + bit; ++i) {
      const auto lo = amp[i], hi = amp[i + bit];
      amp[i] = (lo + hi) * inv_sqrt2;
      amp[i + bit] = (lo - hi) * inv_sqrt2;
    }
}

inline ExactDistribution measure_all(const std::vector<std::complex<double>>& amp, int n_bits) {
  ExactDistribution d = ExactDistribution::zeros(n_bits);
  double total = 0.0;
  for (size_t x = 0; x < amp.size(); ++x) {
    d.probs[x] = std::norm(amp[x]);
    total += d.probs[x];
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::runtime_error("oracle: state norm drifted, circuit not unitary");
  return d;
}

}  // namespace detail

inline ExactDistribution simulate(const GateCircuit& circuit) {
  validate(circuit);
  detail::check_cap(circuit.n_qubits);
  std::vector<std::complex<double>> amp(size_t{1} << circuit.n_qubits, 0.0);
  amp[0] = 1.0;
  const std::complex<double> phase_s(0.0, 1.0);
  for (const Gate& g : circuit.gates) {
    const size_t ba = g.a >= 0 ? size_t{1} << g.a : 0;
    const size_t bb = g.b >= 0 ? size_t{1} << g.b : 0;
    const size_t bc = g.c >= 0 ? size_t{1} << g.c : 0;
    switch (g.kind) {
      case GateKind::kH:
        detail::hadamard_axis(amp, g.a);
        break;
      case GateKind::kX:
        for (size_t x = 0; x < amp.size(); ++x)
          if (!(x & ba)) std::swap(amp[x], amp[x | ba]);
        break;
      case GateKind::kS:
        for (size_t x = 0; x < amp.size(); ++x)
          if (x & ba) amp[x] *= phase_s;
        break;
      case GateKind::kCZ:
        for (size_t x = 0; x < amp.size(); ++x)
          if ((x & ba) && (x & bb)) amp[x] = -amp[x];
        break;
      case GateKind::kCNOT:
        for (size_t x = 0; x < amp.size(); ++x)
          if ((x & bb) && !(x & ba)) std::swap(amp[x], amp[x | ba]);
        break;
      case GateKind::kToffoli:
        for (size_t x = 0; x < amp.size(); ++x)
          if ((x & bb) && (x & bc) && !(x & ba)) std::swap(amp[x], amp[x | ba]);
        break;
      case GateKind::kCPhase: {
        const std::complex<double> w(std::cos(g.theta), std::sin(g.theta));
        for (size_t x = 0; x < amp.size(); ++x)
          if ((x & ba) && (x & bb)) amp[x] *= w;
        break;
      }
      case GateKind::kPermute: {
        std::vector<std::complex<double>> next(amp.size());
        for (size_t x = 0; x < amp.size(); ++x) next[(*g.permutation)[x]] = amp[x];
        amp.swap(next);
        break;
      }
    }
  }
  return detail::measure_all(amp, circuit.n_qubits);
}

inline ExactDistribution simulate(const ShorPeriodSpec& spec) {
  if (spec.N < 1) throw std::invalid_argument("oracle: modulus must be >= 1");
  if (spec.n_x < 1 || spec.n_x > 30) throw std::invalid_argument("oracle: bad n_x");
  int n_f = spec.n_f;
  if (n_f == 0) n_f = std::max(1, 64 - std::countl_zero(spec.N > 1 ? spec.N - 1 : 1));
  if (spec.N > 1 && (spec.N - 1) >> n_f) throw std::invalid_argument("oracle: f register too narrow for modulus");
  detail::check_cap(spec.n_x + n_f);

  const uint64_t Q = uint64_t{1} << spec.n_x;
  const uint64_t a0 = spec.a % spec.N;
  // f values and pre-image classes
  std::vector<uint64_t> f(Q);
  uint64_t v = 1 % spec.N;
  for (uint64_t x = 0; x < Q; ++x) {
    f[x] = v;
    v = mod_mul(v, a0, spec.N);
  }
  std::vector<std::vector<uint64_t>> classes(spec.N);
  for (uint64_t x = 0; x < Q; ++x) classes[f[x]].push_back(x);

  // Fourier transform of each class column, applied as a direct transform:
  // P(x_tilde, f0) = |sum_{x in class(f0)} e^(2 pi i x x_tilde / Q)|^2 / Q^2.
  std::vector<std::complex<double>> twiddle(Q);
  for (uint64_t k = 0; k < Q; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(Q);
    twiddle[k] = {std::cos(angle), std::sin(angle)};
  }
  ExactDistribution d = ExactDistribution::zeros(spec.n_x + n_f);
  const double inv_q2 = 1.0 / (static_cast<double>(Q) * static_cast<double>(Q));
  for (uint64_t f0 = 0; f0 < spec.N; ++f0) {
    if (classes[f0].empty()) continue;
    for (uint64_t xt = 0; xt < Q; ++xt) {
      std::complex<double> sum = 0.0;
      for (uint64_t x : classes[f0]) sum += twiddle[mod_mul(x, xt, Q)];
      d.probs[(xt << n_f) | f0] = std::norm(sum) * inv_q2;
    }
  }
  return d;
}

inline ExactDistribution simulate(const ShorSuperposedNSpec& spec) {
  if (spec.n_N < 1 || spec.n_N > 20) throw std::invalid_argument("oracle: bad n_N");
  int n_f = spec.n_f == 0 ? spec.n_N : spec.n_f;
  if (n_f < spec.n_N) throw std::invalid_argument("oracle: f register narrower than the modulus register");
  detail::check_cap(spec.n_N + spec.n_x + n_f);
  const uint64_t count = uint64_t{1} << spec.n_N;
  const uint64_t mask = count - 1;
  ExactDistribution d = ExactDistribution::zeros(spec.n_N + spec.n_x + n_f);
  const double w = 1.0 / static_cast<double>(count);
  for (uint64_t N = 1; N <= count; ++N) {
    const ExactDistribution branch = simulate(ShorPeriodSpec{spec.a, N, spec.n_x, n_f});
    const uint64_t base = (N & mask) << (spec.n_x + n_f);
    for (size_t i = 0; i < branch.size(); ++i) d.probs[base | i] += w * branch.probs[i];
  }
  return d;
}

inline ExactDistribution simulate(const GroverSpec& spec) {
  detail::check_cap(spec.n_qubits);
  if (spec.t < 0) throw std::invalid_argument("oracle: negative iteration count");
  const size_t size = size_t{1} << spec.n_qubits;
  if (spec.f.size() != size) throw std::invalid_argument("oracle: oracle table has wrong size");
  for (int8_t s : spec.f)
    if (s != 1 && s != -1) throw std::invalid_argument("oracle: oracle values must be +1 or -1");

  std::vector<std::complex<double>> amp(size, std::pow(2.0, -0.5 * spec.n_qubits));
  for (int64_t round = 0; round < spec.t; ++round) {
    for (size_t x = 0; x < size; ++x)
      if (spec.f[x] < 0) amp[x] = -amp[x];
    for (int q = 0; q < spec.n_qubits; ++q) detail::hadamard_axis(amp, q);
    amp[0] = -amp[0];
    for (int q = 0; q < spec.n_qubits; ++q) detail::hadamard_axis(amp, q);
  }
  return detail::measure_all(amp, spec.n_qubits);
}

inline ExactDistribution simulate(const CircuitSpec& spec) {
  return std::visit([](const auto& s) { return simulate(s); }, spec);
}

// Amplitude of x_tilde after Fourier-transforming the uniform superposition
// of the M + 1 points x0, x0 + r, ..., x0 + M r inside [0, 2^n_x):
// sum_m e^(2 pi i x_tilde (x0 + m r) / 2^n_x) / sqrt(2^n_x (M + 1)).
// The geometric series closes to a sin ratio; when x_tilde * r = 0 mod 2^n_x
// every term aligns and the value is sqrt((M+1) / 2^n_x) times the x0 phase.
// Phase reductions are done on integers mod 2^(n_x+1) so large arguments do
// not lose precision.
inline std::complex<double> psi_tilde(uint64_t x0, uint64_t M, uint64_t r, int n_x, uint64_t x_tilde) {
  if (n_x < 1 || n_x > 62) throw std::invalid_argument("psi_tilde: bad n_x");
  const uint64_t Q = uint64_t{1} << n_x;
  if (x_tilde >= Q || x0 >= Q) throw std::invalid_argument("psi_tilde: argument out of range");
  if (r < 1 || x0 + M * r >= Q) throw std::invalid_argument("psi_tilde: support leaves the register");
  const double pi_over_q = std::numbers::pi / static_cast<double>(Q);
  const uint64_t u = mod_mul(x_tilde, r, Q);
  const double phase0 = 2.0 * pi_over_q * static_cast<double>(mod_mul(x_tilde, x0, Q));
  if (u == 0) {
    const double mag = std::sqrt(static_cast<double>(M + 1) / static_cast<double>(Q));
    return {mag * std::cos(phase0), mag * std::sin(phase0)};
  }
  const double half_beta_m = pi_over_q * static_cast<double>(mod_mul(u, M, 2 * Q));
  const double num = std::sin(pi_over_q * static_cast<double>(mod_mul(u, M + 1, 2 * Q)));
  const double den = std::sin(pi_over_q * static_cast<double>(u));
  const double mag = num / den / std::sqrt(static_cast<double>(Q) * static_cast<double>(M + 1));
  const double angle = phase0 + half_beta_m;
  return {mag * std::cos(angle), mag * std::sin(angle)};
}

// Inverse-transform sampling: the smallest x whose cumulative probability
// exceeds p. (Choosing the largest x with cumulative <= p instead would hand
// each outcome its predecessor's mass; the strict-inequality form samples the
// distribution itself.)
inline uint64_t inverse_transform_index(const ExactDistribution& d, double p) {
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("inverse_transform_index: p outside [0, 1)");
  double cum = 0.0;
  size_t last_positive = 0;
  bool any = false;
  for (size_t x = 0; x < d.size(); ++x) {
    if (d.probs[x] > 0.0) {
      last_positive = x;
      any = true;
    }
    cum += d.probs[x];
    if (cum > p) return x;
  }
  if (!any) throw std::invalid_argument("inverse_transform_index: empty distribution");
  return last_positive;  // p fell into rounding slack at the top of the scale
}

inline uint64_t inverse_transform_sample(const ExactDistribution& d, RandomSource& rng) {
  return inverse_transform_index(d, rng.uniform01());
}

}  // namespace weaksim
