#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "weaksim/distribution.hpp"
#include "weaksim/random.hpp"

namespace weaksim {

// After t rounds of the shortened search circuit the state is supported on
// the all-zeros string and the marked string x0 alone, with
// P(t) = sin^2((2t+1) asin(2^{-n/2})) on x0. Both samplers below emit x0
// with exactly that probability and 0 otherwise.
inline double p_success(int n, int64_t t) {
  if (n < 1) throw std::invalid_argument("p_success: need at least one qubit");
  if (t < 0) throw std::invalid_argument("p_success: negative iteration count");
  const double s = std::sin(static_cast<double>(2 * t + 1) * std::asin(std::exp2(-0.5 * n)));
  const double p = s * s;
  return p > 1.0 ? 1.0 : (p < 0.0 ? 0.0 : p);
}

// Attempt budget of the black-box sampler grows quadratically in t; the cap
// 8(2t+1)^2 + 1 also stands in for the attempt count when success is
// certain and the log-ratio formula degenerates.
inline int64_t draw_bound(int64_t t) {
  if (t < 0 || t > (int64_t{1} << 30)) throw std::invalid_argument("draw_bound: iteration count out of range");
  const int64_t odd = 2 * t + 1;
  return 8 * odd * odd + 1;
}

// Smallest N with 1 - (1 - 2^{-n})^N >= P(t), i.e.
// N = ceil(log(1 - P(t)) / log(1 - 2^{-n})). The miss probability
// 1 - P(t) = cos^2((2t+1) asin(2^{-n/2})) is computed directly so the
// formula stays accurate near P = 1; P = 1 exactly falls back to the cap.
inline int64_t n_draws_required(int n, int64_t t) {
  if (n < 1 || n > 62) throw std::invalid_argument("n_draws_required: qubit count out of range");
  if (t < 0) throw std::invalid_argument("n_draws_required: negative iteration count");
  const double c = std::cos(static_cast<double>(2 * t + 1) * std::asin(std::exp2(-0.5 * n)));
  if (c == 0.0) return draw_bound(t);
  const double num = 2.0 * std::log(std::abs(c));       // log(1 - P)
  const double den = std::log1p(-std::exp2(-n));        // log(1 - 2^{-n})
  const double ratio = num / den;
  if (!(ratio < 9e18)) return draw_bound(t);
  int64_t nd = static_cast<int64_t>(std::ceil(ratio));
  return nd < 1 ? 1 : nd;
}

// Acceptance probability of step 5: P' = P(t) / (1 - (1 - 2^{-n})^N).
// Minimality of N guarantees P' <= 1; clamped against rounding.
inline double p_prime(int n, int64_t t, int64_t n_draws) {
  if (n_draws < 1) throw std::invalid_argument("p_prime: need at least one draw");
  const double found = -std::expm1(static_cast<double>(n_draws) * std::log1p(-std::exp2(-n)));
  const double pp = p_success(n, t) / found;
  return pp > 1.0 ? 1.0 : pp;
}

inline double p_prime(int n, int64_t t) { return p_prime(n, t, n_draws_required(n, t)); }

// Smallest qubit count at which the attempt budget stays within the
// quadratic bound for this t (it holds for every larger n, since the budget
// decreases toward (2t+1)^2 as n grows).
inline int smallest_n_for_draw_bound(int64_t t) {
  for (int n = 1; n <= 62; ++n)
    if (n_draws_required(n, t) <= draw_bound(t)) return n;
  return -1;
}

// The x0-as-input sampler: emit x0 with probability P(t), else 0.
inline uint64_t sample_with_x0(uint64_t x0, int n, int64_t t, RandomSource& rng) {
  if (n < 1 || n > 62) throw std::invalid_argument("sample_with_x0: qubit count out of range");
  if (x0 >> n) throw std::invalid_argument("sample_with_x0: x0 outside the register");
  return rng.uniform01() < p_success(n, t) ? x0 : 0;
}

struct OracleSampleResult {
  uint64_t outcome = 0;
  int64_t n_evals = 0;  // black-box invocations, the sampler's cost metric
  int64_t n_draws = 0;
  double accept_prob = 1.0;  // the P' used in the final biased coin
};

// The black-box sampler: draw N uniform points, evaluate f on each, and if
// the marked element appears return it with probability P', else 0. The
// output law is identical to sample_with_x0 by construction. A second
// distinct marked element violates the unique-x0 precondition and throws
// when observed; a predicate with no marked element cannot be detected and
// simply never finds x0.
template <typename Predicate>
OracleSampleResult sample_with_oracle(Predicate&& f, int n, int64_t t, RandomSource& rng) {
  if (n < 1 || n > 62) throw std::invalid_argument("sample_with_oracle: qubit count out of range");
  OracleSampleResult res;
  res.n_draws = n_draws_required(n, t);
  res.accept_prob = p_prime(n, t, res.n_draws);
  bool found = false;
  uint64_t x0 = 0;
  for (int64_t i = 0; i < res.n_draws; ++i) {
    const uint64_t x = rng.below(uint64_t{1} << n);
    const int fx = f(x);
    ++res.n_evals;
    if (fx == -1) {
      if (found && x != x0)
        throw std::domain_error("sample_with_oracle: predicate marks more than one element");
      found = true;
      x0 = x;
    } else if (fx != 1) {
      throw std::domain_error("sample_with_oracle: predicate must return -1 or +1");
    }
  }
  if (found && rng.uniform01() < res.accept_prob) res.outcome = x0;
  return res;
}

// The {0, x0}-supported output law both samplers realize.
inline ExactDistribution grover_output_distribution(int n, int64_t t, uint64_t x0) {
  if (n < 1 || n > 30) throw std::invalid_argument("grover_output_distribution: qubit count out of range");
  if (x0 >> n) throw std::invalid_argument("grover_output_distribution: x0 outside the register");
  ExactDistribution d = ExactDistribution::zeros(n);
  const double p = p_success(n, t);
  d.probs[x0] += p;
  d.probs[0] += 1.0 - p;
  return d;
}

}  // namespace weaksim
