#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "weaksim/numtheory.hpp"
#include "weaksim/random.hpp"

namespace weaksim {

// G = Z_{d_1} x ... x Z_{d_k}, a subgroup K given by generators, and a
// shift x: the coset state is the uniform superposition over K + x, so its
// measurement law is uniform on the coset.
struct AbelianGroupSpec {
  std::vector<uint64_t> moduli;                     // cycle orders d_i >= 1
  std::vector<std::vector<uint64_t>> generators;    // elements of G spanning K
  std::vector<uint64_t> shift;                      // the coset representative x

  void validate() const {
    if (moduli.empty()) throw std::invalid_argument("AbelianGroupSpec: no cycle orders");
    for (uint64_t d : moduli)
      if (d < 1) throw std::invalid_argument("AbelianGroupSpec: cycle order must be positive");
    if (shift.size() != moduli.size()) throw std::invalid_argument("AbelianGroupSpec: shift size mismatch");
    for (size_t i = 0; i < shift.size(); ++i)
      if (shift[i] >= moduli[i]) throw std::invalid_argument("AbelianGroupSpec: shift not reduced");
    for (const auto& g : generators) {
      if (g.size() != moduli.size()) throw std::invalid_argument("AbelianGroupSpec: generator size mismatch");
      for (size_t i = 0; i < g.size(); ++i)
        if (g[i] >= moduli[i]) throw std::invalid_argument("AbelianGroupSpec: generator not reduced");
    }
  }

  // Exponent of G: the lcm of the cycle orders. Every element order divides
  // it, so coefficients uniform on [0, e) push forward to uniform on K.
  uint64_t exponent() const {
    uint64_t e = 1;
    for (uint64_t d : moduli) {
      const uint64_t g = std::gcd(e, d);
      const uint64_t q = d / g;
      if (e > UINT64_MAX / q) throw std::overflow_error("AbelianGroupSpec: group exponent overflows");
      e *= q;
    }
    return e;
  }
};

// One element uniform on K + x: x + sum_j c_j g_j with every c_j uniform on
// [0, e). The map (c_1, ..., c_m) -> sum c_j g_j is a homomorphism from
// Z_e^m onto K, so the output is exactly uniform on the coset.
inline std::vector<uint64_t> coset_sample(const AbelianGroupSpec& spec, RandomSource& rng) {
  spec.validate();
  const uint64_t e = spec.exponent();
  std::vector<uint64_t> out = spec.shift;
  for (const auto& g : spec.generators) {
    const uint64_t c = rng.below(e);
    for (size_t i = 0; i < out.size(); ++i)
      out[i] = (out[i] + mod_mul(c, g[i], spec.moduli[i])) % spec.moduli[i];
  }
  return out;
}

// All coset members by closure from the shift, sorted; for verification at
// small sizes.
inline std::vector<std::vector<uint64_t>> enumerate_coset(const AbelianGroupSpec& spec,
                                                          size_t max_size = 4096) {
  spec.validate();
  std::set<std::vector<uint64_t>> seen{spec.shift};
  std::vector<std::vector<uint64_t>> frontier{spec.shift};
  while (!frontier.empty()) {
    std::vector<std::vector<uint64_t>> next;
    for (const auto& elem : frontier) {
      for (const auto& g : spec.generators) {
        std::vector<uint64_t> cand(elem.size());
        for (size_t i = 0; i < elem.size(); ++i) cand[i] = (elem[i] + g[i]) % spec.moduli[i];
        if (seen.insert(cand).second) {
          if (seen.size() > max_size) throw std::length_error("enumerate_coset: coset too large");
          next.push_back(std::move(cand));
        }
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

// Mixed-radix packing of a group element into a flat index (component 0 is
// the least significant digit).
inline uint64_t mixed_radix_encode(const std::vector<uint64_t>& moduli, const std::vector<uint64_t>& elem) {
  if (elem.size() != moduli.size()) throw std::invalid_argument("mixed_radix_encode: size mismatch");
  uint64_t idx = 0;
  for (size_t i = moduli.size(); i-- > 0;) {
    if (elem[i] >= moduli[i]) throw std::invalid_argument("mixed_radix_encode: component not reduced");
    idx = idx * moduli[i] + elem[i];
  }
  return idx;
}

}  // namespace weaksim
