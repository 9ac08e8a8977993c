#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace weaksim {

// Probability distribution over n_bits-wide outcomes, stored dense.
// probs[x] is the probability of outcome index x; size is exactly 2^n_bits.
struct ExactDistribution {
  int n_bits = 0;
  std::vector<double> probs;

  static ExactDistribution zeros(int n_bits) {
    if (n_bits < 0 || n_bits > 30) throw std::invalid_argument("ExactDistribution: n_bits out of range");
    ExactDistribution d;
    d.n_bits = n_bits;
    d.probs.assign(size_t{1} << n_bits, 0.0);
    return d;
  }

  size_t size() const { return probs.size(); }
};

inline double total_mass(const ExactDistribution& d) {
  double s = 0.0;
  for (double p : d.probs) s += p;
  return s;
}

inline bool is_normalized(const ExactDistribution& d, double tol = 1e-12) {
  for (double p : d.probs)
    if (p < -tol) return false;
  return std::abs(total_mass(d) - 1.0) <= tol;
}

// Marginal over the top keep_bits of the outcome index (low bits summed out).
inline ExactDistribution marginal_high(const ExactDistribution& d, int keep_bits) {
  if (keep_bits < 0 || keep_bits > d.n_bits) throw std::invalid_argument("marginal_high: bad keep_bits");
  ExactDistribution out = ExactDistribution::zeros(keep_bits);
  const int low = d.n_bits - keep_bits;
  for (size_t x = 0; x < d.size(); ++x) out.probs[x >> low] += d.probs[x];
  return out;
}

// Marginal over the low keep_bits of the outcome index.
inline ExactDistribution marginal_low(const ExactDistribution& d, int keep_bits) {
  if (keep_bits < 0 || keep_bits > d.n_bits) throw std::invalid_argument("marginal_low: bad keep_bits");
  ExactDistribution out = ExactDistribution::zeros(keep_bits);
  const uint64_t mask = (uint64_t{1} << keep_bits) - 1;
  for (size_t x = 0; x < d.size(); ++x) out.probs[x & mask] += d.probs[x];
  return out;
}

// Distribution of the high bits conditioned on the low low_bits equalling
// low_value, together with the weight of that event. Weight 0 yields an
// all-zero conditional.
inline std::pair<ExactDistribution, double> condition_on_low(const ExactDistribution& d, int low_bits,
                                                             uint64_t low_value) {
  if (low_bits < 0 || low_bits > d.n_bits) throw std::invalid_argument("condition_on_low: bad low_bits");
  if (low_value >> low_bits) throw std::invalid_argument("condition_on_low: value out of range");
  ExactDistribution out = ExactDistribution::zeros(d.n_bits - low_bits);
  double weight = 0.0;
  for (size_t hi = 0; hi < out.size(); ++hi) {
    const double p = d.probs[(hi << low_bits) | low_value];
    out.probs[hi] = p;
    weight += p;
  }
  if (weight > 0.0)
    for (double& p : out.probs) p /= weight;
  return {std::move(out), weight};
}

}  // namespace weaksim
