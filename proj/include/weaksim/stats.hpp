#pragma once

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "weaksim/distribution.hpp"

namespace weaksim {

// Total variation distance between two distributions on the same outcome
// space: max_A |P(A) - Q(A)| = (1/2) sum |p_x - q_x|.
inline double tvd(const ExactDistribution& a, const ExactDistribution& b) {
  if (a.n_bits != b.n_bits) throw std::invalid_argument("tvd: mismatched outcome spaces");
  double s = 0.0;
  for (size_t x = 0; x < a.size(); ++x) s += std::abs(a.probs[x] - b.probs[x]);
  return 0.5 * s;
}

// TVD of an empirical histogram against an exact distribution.
inline double tvd_counts(const std::vector<int64_t>& counts, const ExactDistribution& expected) {
  if (counts.size() != expected.size()) throw std::invalid_argument("tvd_counts: size mismatch");
  int64_t n = 0;
  for (int64_t c : counts) n += c;
  if (n <= 0) throw std::invalid_argument("tvd_counts: empty sample");
  double s = 0.0;
  for (size_t x = 0; x < counts.size(); ++x)
    s += std::abs(static_cast<double>(counts[x]) / static_cast<double>(n) - expected.probs[x]);
  return 0.5 * s;
}

struct GofReport {
  double stat = 0.0;
  int dof = 0;
  double p = 1.0;
  int64_t n = 0;
  int pooled_bins = 0;  // effective bin count after pooling
};

// Survival probability of a chi-square variable: P(X_dof >= stat), via the
// regularized upper incomplete gamma function.
inline double chi_square_sf(double stat, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_sf: dof must be positive");
  if (stat <= 0.0) return 1.0;
  if (std::isinf(stat)) return 0.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * stat);
}

// Pearson goodness-of-fit of observed counts against an exact distribution.
// Bins whose expected count is below min_expected are pooled into a single
// tail bin (a per-bin rule, so relabeling outcomes cannot change the result);
// if the pooled tail itself stays below min_expected it is merged into the
// kept bin with the smallest expected count. A sampled outcome with expected
// probability zero makes the statistic infinite (p = 0). Degenerates to an
// error when fewer than two effective bins remain.
inline GofReport chi_square_gof(const std::vector<int64_t>& counts, const std::vector<double>& expected,
                                double min_expected = 5.0) {
  if (counts.size() != expected.size()) throw std::invalid_argument("chi_square_gof: size mismatch");
  int64_t n = 0;
  for (int64_t c : counts) n += c;
  if (n <= 0) throw std::invalid_argument("chi_square_gof: empty sample");
  const double dn = static_cast<double>(n);

  double tail_expected = 0.0;
  int64_t tail_observed = 0;
  double kept_min_expected = std::numeric_limits<double>::infinity();
  size_t kept_min_index = counts.size();
  std::vector<size_t> kept;
  for (size_t x = 0; x < counts.size(); ++x) {
    const double e = expected[x] * dn;
    if (e <= 0.0) {
      if (counts[x] > 0) return {std::numeric_limits<double>::infinity(), 1, 0.0, n, 2};
      continue;
    }
    if (e >= min_expected) {
      kept.push_back(x);
      if (e < kept_min_expected) {
        kept_min_expected = e;
        kept_min_index = x;
      }
    } else {
      tail_expected += e;
      tail_observed += counts[x];
    }
  }

  bool tail_separate = tail_expected > 0.0;
  if (tail_separate && tail_expected < min_expected && !kept.empty()) {
    tail_separate = false;  // fold the undersized tail into the smallest kept bin
  } else if (tail_separate && kept.empty()) {
    throw std::domain_error("chi_square_gof: all mass pooled into one bin");
  }

  double stat = 0.0;
  int bins = 0;
  for (size_t x : kept) {
    double e = expected[x] * dn;
    double o = static_cast<double>(counts[x]);
    if (!tail_separate && tail_expected > 0.0 && x == kept_min_index) {
      e += tail_expected;
      o += static_cast<double>(tail_observed);
    }
    const double d = o - e;
    stat += d * d / e;
    ++bins;
  }
  if (tail_separate) {
    const double d = static_cast<double>(tail_observed) - tail_expected;
    stat += d * d / tail_expected;
    ++bins;
  }
  if (bins < 2) throw std::domain_error("chi_square_gof: degenerate test, fewer than two bins");
  const int dof = bins - 1;
  return {stat, dof, chi_square_sf(stat, dof), n, bins};
}

inline GofReport chi_square_gof(const std::vector<int64_t>& counts, const ExactDistribution& expected,
                                double min_expected = 5.0) {
  return chi_square_gof(counts, expected.probs, min_expected);
}

// Two-sample Pearson chi-square for identity of distributions: bins with
// combined count below min_combined are pooled as above. stat =
// sum (K1 a_x - K2 b_x)^2 / (a_x + b_x) with K1 = sqrt(nb/na), K2 = 1/K1.
inline GofReport chi_square_two_sample(const std::vector<int64_t>& a, const std::vector<int64_t>& b,
                                       double min_combined = 5.0) {
  if (a.size() != b.size()) throw std::invalid_argument("chi_square_two_sample: size mismatch");
  int64_t na = 0, nb = 0;
  for (int64_t c : a) na += c;
  for (int64_t c : b) nb += c;
  if (na <= 0 || nb <= 0) throw std::invalid_argument("chi_square_two_sample: empty sample");
  const double k1 = std::sqrt(static_cast<double>(nb) / static_cast<double>(na));
  const double k2 = 1.0 / k1;

  double stat = 0.0;
  int bins = 0;
  double tail_a = 0.0, tail_b = 0.0, tail_combined = 0.0;
  for (size_t x = 0; x < a.size(); ++x) {
    const double combined = static_cast<double>(a[x] + b[x]);
    if (combined <= 0.0) continue;
    if (combined >= min_combined) {
      const double d = k1 * static_cast<double>(a[x]) - k2 * static_cast<double>(b[x]);
      stat += d * d / combined;
      ++bins;
    } else {
      tail_a += static_cast<double>(a[x]);
      tail_b += static_cast<double>(b[x]);
      tail_combined += combined;
    }
  }
  if (tail_combined > 0.0) {
    const double d = k1 * tail_a - k2 * tail_b;
    stat += d * d / tail_combined;
    ++bins;
  }
  if (bins < 2) throw std::domain_error("chi_square_two_sample: degenerate test, fewer than two bins");
  const int dof = bins - 1;
  return {stat, dof, chi_square_sf(stat, dof), na + nb, bins};
}

}  // namespace weaksim
