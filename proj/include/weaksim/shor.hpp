#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "weaksim/distribution.hpp"
#include "weaksim/numtheory.hpp"
#include "weaksim/random.hpp"

namespace weaksim {

// Measurement distribution of the Fourier-transformed register, reduced to
// one period of its wrapped profile: with p/q = r/2^n_x in lowest terms, the
// register outcome decomposes as x_tilde = s + z q with z uniform and
// s = v p^-1 mod q, where v follows
//
//   rho(v) = (1 - cos(2 pi v (M+1)/q)) / (q (M+1) (1 - cos(2 pi v / q))),
//
// the value at v = 0 (and the M = 0 case) filled in by continuity. rho sums
// to 1 for 0 <= M <= q - 1. Rejection sampling uses the dominating envelope
//
//   eta(v) = min((M+1)^2, 2 / (1 - cos(2 pi v / q))) / (q (M+1)),
//
// flat on the peak caps near v = 0 and v = q (out to the crossing point
// delta = (q/pi) asin(1/(M+1))) and proportional to 1/(1 - cos) between
// them. Both branch values dominate rho pointwise, so the envelope stays
// valid wherever the stored cap boundary lands.
struct RhoParams {
  uint64_t M = 0;  // pre-image count minus one, 0 <= M <= q - 1
  uint64_t q = 1;  // power of two
  uint64_t p = 1;  // odd, 1 <= p < q (p = q = 1 degenerate)
  double delta = 0.0;
  uint64_t flat_cut = 0;  // largest v treated as cap; cap is {0..flat_cut} u {q-flat_cut..q-1}
};

// r / 2^n_x in lowest terms, as (p, q). Requires 1 <= r < 2^n_x.
inline std::pair<uint64_t, uint64_t> reduce_fraction(uint64_t r, int n_x) {
  if (n_x < 1 || n_x > 62) throw std::invalid_argument("reduce_fraction: bad register width");
  const uint64_t Q = uint64_t{1} << n_x;
  if (r < 1 || r >= Q) throw std::invalid_argument("reduce_fraction: period outside [1, 2^n_x)");
  const uint64_t g = r & (~r + 1);  // gcd with a power of two = lowest set bit
  return {r / g, Q / g};
}

namespace detail {

inline double sin_pi_frac(uint64_t num, uint64_t den) {
  return std::sin(std::numbers::pi * static_cast<double>(num) / static_cast<double>(den));
}

// Envelope cap predicate: (M+1)^2 (1 - cos(2 pi v / q)) <= 2, i.e.
// (M+1) sin(pi v / q) <= 1 for v <= q/2.
inline bool inside_cap(uint64_t v, uint64_t M, uint64_t q) {
  return static_cast<double>(M + 1) * sin_pi_frac(v, q) <= 1.0;
}

}  // namespace detail

inline RhoParams make_rho_params(uint64_t M, uint64_t q, uint64_t p) {
  if (q == 0 || (q & (q - 1)) != 0) throw std::invalid_argument("make_rho_params: q must be a power of two");
  if (p >= q && !(p == 1 && q == 1)) throw std::invalid_argument("make_rho_params: need p < q");
  if ((p & 1) == 0) throw std::invalid_argument("make_rho_params: p must be odd");
  if (M > q - 1) throw std::invalid_argument("make_rho_params: need M <= q - 1");
  RhoParams params{M, q, p, 0.0, 0};
  if (M >= 1 && q >= 2) {
    params.delta = static_cast<double>(q) / std::numbers::pi * std::asin(1.0 / static_cast<double>(M + 1));
    const uint64_t h = q / 2;
    uint64_t fl = static_cast<uint64_t>(params.delta);
    if (fl > h - 1) fl = h - 1;
    while (fl + 1 < h && detail::inside_cap(fl + 1, M, q)) ++fl;
    while (fl > 0 && !detail::inside_cap(fl, M, q)) --fl;
    params.flat_cut = fl;
  }
  return params;
}

inline double rho(const RhoParams& params, uint64_t v) {
  v %= params.q;
  if (params.M == 0) return 1.0 / static_cast<double>(params.q);
  if (v == 0) return static_cast<double>(params.M + 1) / static_cast<double>(params.q);
  const double num = detail::sin_pi_frac(mod_mul(v, params.M + 1, params.q), params.q);
  const double den = detail::sin_pi_frac(v, params.q);
  return num * num / (den * den * static_cast<double>(params.q) * static_cast<double>(params.M + 1));
}

inline double eta(const RhoParams& params, uint64_t v) {
  v %= params.q;
  if (params.M == 0) return 1.0 / static_cast<double>(params.q);
  const uint64_t folded = std::min(v, params.q - v);  // q - v for v > 0; v = 0 folds to 0
  if (folded <= params.flat_cut || v == 0)
    return static_cast<double>(params.M + 1) / static_cast<double>(params.q);
  const double s = detail::sin_pi_frac(folded, params.q);
  return 1.0 / (static_cast<double>(params.q) * static_cast<double>(params.M + 1) * s * s);
}

// Position of v_bar in the envelope's monotone rearrangement: even ranks walk
// down from 0, odd ranks walk up from q - 1, so the sequence
// eta(v(0)), eta(v(1)), ... is nonincreasing.
inline uint64_t rearranged_v(uint64_t q, uint64_t v_bar) {
  if (v_bar >= q) throw std::invalid_argument("rearranged_v: rank out of range");
  return (v_bar % 2 == 0) ? v_bar / 2 : q - 1 - v_bar / 2;
}

enum class ProposalMethod { kFast, kReference };

// Exact inverse-transform table over all q envelope values. The direct
// reference realization; memory is O(q).
class ReferenceProposalTable {
 public:
  explicit ReferenceProposalTable(const RhoParams& params) : params_(params) {
    if (params.q > (uint64_t{1} << 20))
      throw std::length_error("ReferenceProposalTable: q above 2^20, use the fast sampler");
    cum_.resize(params.q);
    double acc = 0.0;
    for (uint64_t v = 0; v < params.q; ++v) {
      acc += eta(params, v);
      cum_[v] = acc;
    }
  }

  uint64_t sample(RandomSource& rng) const {
    const double u = rng.uniform01() * cum_.back();
    size_t lo = 0, hi = cum_.size() - 1;
    while (lo < hi) {
      const size_t mid = (lo + hi) / 2;
      if (cum_[mid] > u)
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }

  double total_weight() const { return cum_.back(); }

 private:
  RhoParams params_;
  std::vector<double> cum_;
};

namespace detail {

// One proposal from the envelope without materializing it. The envelope
// splits into exact atoms (the flat cap points, the two boundary points
// flat_cut + 1 and q - flat_cut - 1, the center q/2) plus the strictly
// interior tail points, which are drawn through a continuous majorant:
// candidate v = floor(xi) with xi sampled from density 1/(1 - cos) shifted
// by one (closed-form cot antiderivative, inverted with atan), accepted with
// probability sin^2(pi (xi-1)/q) / sin^2(pi v / q) <= 1. An interior
// rejection restarts the whole category draw, so the emitted law is exactly
// proportional to eta.
inline uint64_t fast_proposal(const RhoParams& params, RandomSource& rng) {
  const uint64_t q = params.q;
  const uint64_t h = q / 2;
  const uint64_t fl = params.flat_cut;
  const uint64_t e = fl + 1;  // first point past the cap, 1 <= e <= h
  const double pi = std::numbers::pi;
  const double m1 = static_cast<double>(params.M + 1);
  const double dq = static_cast<double>(q);

  const double w_flat = static_cast<double>(2 * fl + 1) * m1 / dq;
  double w_edge = 0.0, w_center = 0.0, w_tail = 0.0;
  double cot_e = 0.0, tail_integral = 0.0;
  const double tail_scale = 2.0 / (dq * m1);  // converts 1/(1-cos) integrals to eta mass
  if (e == h) {
    w_center = 1.0 / (dq * m1);  // boundary point is the center
  } else {
    const double se = sin_pi_frac(e, q);
    w_edge = 2.0 / (dq * m1 * se * se);
    w_center = 1.0 / (dq * m1);
    if (e + 1 <= h - 1) {
      cot_e = std::cos(pi * static_cast<double>(e) / dq) / se;
      const double sh = sin_pi_frac(h - 1, q);
      const double cot_h = std::cos(pi * static_cast<double>(h - 1) / dq) / sh;
      tail_integral = dq / (2.0 * pi) * (cot_e - cot_h);  // integral of 1/(1 - cos(2 pi t / q))
      w_tail = 2.0 * tail_scale * tail_integral;
    }
  }
  const double total = w_flat + w_edge + w_center + w_tail;

  for (;;) {
    double u = rng.uniform01() * total;
    if (u < w_flat) {
      const uint64_t i = rng.below(2 * fl + 1);
      return i <= fl ? i : q - (i - fl);
    }
    u -= w_flat;
    if (u < w_edge) return rng.coin() ? e : q - e;
    u -= w_edge;
    if (u < w_center) return h;
    // interior tail: xi in [e+1, h), candidate v = floor(xi)
    const bool mirror = rng.coin();
    const double y = rng.uniform01() * tail_integral;
    const double x = cot_e - 2.0 * pi / dq * y;  // remaining cot value, positive up to rounding
    const double xi = x > 0.0 ? 1.0 + dq / pi * std::atan(1.0 / x) : static_cast<double>(h);
    uint64_t v = static_cast<uint64_t>(xi);
    if (v < e + 1) v = e + 1;
    if (v > h - 1) v = h - 1;
    const double s_prev = std::sin(pi * (xi - 1.0) / dq);
    const double s_v = sin_pi_frac(v, q);
    if (rng.uniform01() * s_v * s_v < s_prev * s_prev) return mirror ? q - v : v;
  }
}

}  // namespace detail

// One draw from the normalized envelope.
inline uint64_t sample_proposal(const RhoParams& params, RandomSource& rng,
                                ProposalMethod method = ProposalMethod::kFast) {
  if (params.q == 1) return 0;
  if (params.M == 0) return rng.below(params.q);
  if (method == ProposalMethod::kReference) return ReferenceProposalTable(params).sample(rng);
  return detail::fast_proposal(params, rng);
}

struct SampleStats {
  uint64_t proposals = 0;
  uint64_t accepts = 0;

  double proposals_per_accept() const {
    return accepts == 0 ? 0.0 : static_cast<double>(proposals) / static_cast<double>(accepts);
  }
};

// One draw from rho by rejection against the envelope. The acceptance ratio
// simplifies per branch: sin^2(pi v(M+1)/q) / ((M+1)^2 sin^2(pi v/q)) on the
// cap, sin^2(pi v(M+1)/q) on the tail.
inline uint64_t sample_rho(const RhoParams& params, RandomSource& rng, SampleStats* stats = nullptr,
                           ProposalMethod method = ProposalMethod::kFast) {
  if (params.q == 1 || params.M == 0) {
    if (stats) {
      ++stats->proposals;
      ++stats->accepts;
    }
    return params.q == 1 ? 0 : rng.below(params.q);
  }
  for (;;) {
    const uint64_t v = sample_proposal(params, rng, method);
    if (stats) ++stats->proposals;
    double ratio;
    if (v == 0) {
      ratio = 1.0;
    } else {
      const double num = detail::sin_pi_frac(mod_mul(v, params.M + 1, params.q), params.q);
      const uint64_t folded = std::min(v, params.q - v);
      if (folded <= params.flat_cut) {
        const double den = static_cast<double>(params.M + 1) * detail::sin_pi_frac(v, params.q);
        ratio = num * num / (den * den);
      } else {
        ratio = num * num;
      }
    }
    if (rng.uniform01() < ratio) {
      if (stats) ++stats->accepts;
      return v;
    }
  }
}

// First-register distribution conditioned on a measured f value whose
// pre-image inside [0, 2^n_x) is {x0, x0 + r, ..., x0 + M r} (x0 below the
// preperiod means a singleton pre-image): P(x_tilde) = (q / 2^n_x) *
// rho(x_tilde p mod q). The x0 phase cancels in the square modulus, so only
// M = floor((2^n_x - 1 - x0) / r) enters; M = 0 gives the uniform law.
inline ExactDistribution exact_first_register(const PeriodStructure& period, int n_x, uint64_t x0) {
  if (n_x < 1 || n_x > 30) throw std::invalid_argument("exact_first_register: bad register width");
  const uint64_t Q = uint64_t{1} << n_x;
  if (x0 >= Q) throw std::invalid_argument("exact_first_register: x0 outside the register");
  ExactDistribution d = ExactDistribution::zeros(n_x);
  uint64_t M = 0;
  if (x0 >= period.preperiod && period.period < Q) M = (Q - 1 - x0) / period.period;
  if (M == 0) {
    const double u = 1.0 / static_cast<double>(Q);
    for (auto& p : d.probs) p = u;
    return d;
  }
  const auto [p, q] = reduce_fraction(period.period, n_x);
  const RhoParams params = make_rho_params(M, q, p);
  const double scale = static_cast<double>(q) / static_cast<double>(Q);
  for (uint64_t xt = 0; xt < Q; ++xt) d.probs[xt] = scale * rho(params, mod_mul(xt % q, p, q));
  return d;
}

// Unconditional first-register law: mixture of the conditionals over the
// measured-f classes, weighted by pre-image size.
inline ExactDistribution first_register_marginal(const PeriodStructure& period, int n_x) {
  const uint64_t Q = uint64_t{1} << n_x;
  ExactDistribution d = ExactDistribution::zeros(n_x);
  const double inv_q = 1.0 / static_cast<double>(Q);
  const uint64_t singletons = std::min<uint64_t>(period.preperiod, Q);
  for (auto& p : d.probs) p = static_cast<double>(singletons) * inv_q * inv_q;
  for (uint64_t x0 = period.preperiod; x0 < std::min<uint64_t>(period.preperiod + period.period, Q); ++x0) {
    const uint64_t members = (Q - 1 - x0) / period.period + 1;
    const ExactDistribution cond = exact_first_register(period, n_x, x0);
    const double w = static_cast<double>(members) * inv_q;
    for (uint64_t xt = 0; xt < Q; ++xt) d.probs[xt] += w * cond.probs[xt];
  }
  return d;
}

// One representative per measured-f class inside [0, Q): each value below
// the preperiod is its own class; the periodic classes are represented by
// x0 in [x_min, x_min + r). Distinct representatives map to distinct f.
inline std::vector<uint64_t> class_representatives(const PeriodStructure& period, uint64_t Q) {
  std::vector<uint64_t> reps;
  for (uint64_t x = 0; x < std::min(period.preperiod, Q); ++x) reps.push_back(x);
  for (uint64_t x0 = period.preperiod; x0 < std::min(period.preperiod + period.period, Q); ++x0)
    reps.push_back(x0);
  return reps;
}

// Closed-form joint law over (x_tilde, f), packed (x_tilde << n_f) | f to
// match the oracle's outcome indexing: mixture of the per-class conditionals
// weighted by pre-image size. n_f must hold every f value.
inline ExactDistribution exact_joint(const PeriodStructure& period, int n_x, int n_f) {
  if (n_f < 1 || n_f > 30) throw std::invalid_argument("exact_joint: bad f register width");
  if (period.modulus > 1 && (period.modulus - 1) >> n_f)
    throw std::invalid_argument("exact_joint: f register too narrow for modulus");
  const uint64_t Q = uint64_t{1} << n_x;
  ExactDistribution d = ExactDistribution::zeros(n_x + n_f);
  const double inv_q = 1.0 / static_cast<double>(Q);
  for (uint64_t x0 : class_representatives(period, Q)) {
    const uint64_t f0 = mod_pow(period.base, x0, period.modulus);
    const uint64_t members =
        (x0 >= period.preperiod && period.period < Q) ? (Q - 1 - x0) / period.period + 1 : 1;
    const double w = static_cast<double>(members) * inv_q;
    const ExactDistribution cond = exact_first_register(period, n_x, x0);
    for (uint64_t xt = 0; xt < Q; ++xt) d.probs[(xt << n_f) | f0] += w * cond.probs[xt];
  }
  return d;
}

struct ShorSample {
  uint64_t x_tilde = 0;
  uint64_t f = 0;
};

// Period structure specialized to one register width, with the reduced
// fraction and its inverse precomputed for bulk sampling.
struct PreparedShor {
  PeriodStructure period;
  int n_x = 1;
  uint64_t Q = 2;
  uint64_t p = 1, q = 1, p_inv = 1;
  bool reducible = false;  // period < Q, so the wrapped decomposition applies
};

inline PreparedShor prepare_shor(const PeriodStructure& period, int n_x) {
  if (n_x < 1 || n_x > 62) throw std::invalid_argument("prepare_shor: bad register width");
  PreparedShor ctx;
  ctx.period = period;
  ctx.n_x = n_x;
  ctx.Q = uint64_t{1} << n_x;
  if (period.period >= 1 && period.period < ctx.Q) {
    std::tie(ctx.p, ctx.q) = reduce_fraction(period.period, n_x);
    ctx.p_inv = mod_inverse(ctx.p, ctx.q);
    ctx.reducible = true;
  }
  return ctx;
}

// One weak-simulation draw of the period-finding circuit: pick the second
// register by evaluating f at a uniform x, then draw the Fourier register
// from its conditional. Pre-image classes with a single member (x below the
// preperiod, or M = 0) transform to the uniform law.
inline ShorSample sample_shor(const PreparedShor& ctx, RandomSource& rng, SampleStats* stats = nullptr,
                              ProposalMethod method = ProposalMethod::kFast) {
  const uint64_t x_bar = rng.below(ctx.Q);
  ShorSample out;
  out.f = mod_pow(ctx.period.base, x_bar, ctx.period.modulus);
  if (x_bar < ctx.period.preperiod || !ctx.reducible) {
    out.x_tilde = rng.below(ctx.Q);
    return out;
  }
  const uint64_t x0 = ctx.period.preperiod + (x_bar - ctx.period.preperiod) % ctx.period.period;
  const uint64_t M = (ctx.Q - 1 - x0) / ctx.period.period;
  if (M == 0) {
    out.x_tilde = rng.below(ctx.Q);
    return out;
  }
  const RhoParams params = make_rho_params(M, ctx.q, ctx.p);
  const uint64_t v = sample_rho(params, rng, stats, method);
  const uint64_t s = mod_mul(v, ctx.p_inv, ctx.q);
  const uint64_t z = rng.below(ctx.Q / ctx.q);
  out.x_tilde = s + z * ctx.q;
  return out;
}

inline ShorSample sample_shor(const PeriodStructure& period, int n_x, RandomSource& rng,
                              SampleStats* stats = nullptr, ProposalMethod method = ProposalMethod::kFast) {
  return sample_shor(prepare_shor(period, n_x), rng, stats, method);
}

struct SuperposedSample {
  uint64_t N = 1;
  uint64_t x_tilde = 0;
  uint64_t f = 0;
};

// Weak simulation of the circuit with the modulus register in superposition:
// N arrives uniform on [1, 2^n_N] with a deep factorization attached (so the
// period comes from the order computation, no factoring of arbitrary
// integers), then one period-finding draw for a mod N.
inline SuperposedSample sample_superposed_n(uint64_t a, int n_N, int n_x, RandomSource& rng,
                                            const PrimeSieve* sieve = nullptr, SampleStats* stats = nullptr,
                                            ProposalMethod method = ProposalMethod::kFast) {
  if (n_N < 1 || n_N > 62) throw std::invalid_argument("sample_superposed_n: bad modulus register width");
  const DeepFactoredInteger deep = kalai_sample_deep(uint64_t{1} << n_N, rng, sieve);
  const PeriodStructure period = ultimate_period(a, deep);
  const ShorSample s = sample_shor(period, n_x, rng, stats, method);
  return {deep.outer.value, s.x_tilde, s.f};
}

}  // namespace weaksim
