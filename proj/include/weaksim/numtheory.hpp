#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "weaksim/random.hpp"

namespace weaksim {

// A positive integer together with its prime factorization.
// factors holds (prime, multiplicity) pairs, primes strictly ascending.
// value == product of prime^multiplicity; value 1 has an empty list.
struct FactoredInteger {
  uint64_t value = 1;
  std::vector<std::pair<uint64_t, int>> factors;
};

// A factored integer that additionally carries, for every prime p_i of the
// outer value, the plain factorization of p_i - 1. predecessor[i] matches
// outer.factors[i]. The predecessor factorizations carry no deeper levels.
struct DeepFactoredInteger {
  FactoredInteger outer;
  std::vector<FactoredInteger> predecessor;
};

// Eventual period structure of f(x) = base^x mod modulus:
// f(x + period) = f(x) for exactly the x >= preperiod, period minimal, and
// stabilized_gcd = gcd(base^k, modulus) for every k >= preperiod.
// base is stored reduced mod modulus.
struct PeriodStructure {
  uint64_t modulus = 1;
  uint64_t base = 0;
  uint64_t period = 1;
  uint64_t preperiod = 0;
  uint64_t stabilized_gcd = 1;
};

inline uint64_t mod_mul(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

// b^e mod m, with 0^0 = 1. m >= 1.
inline uint64_t mod_pow(uint64_t b, uint64_t e, uint64_t m) {
  if (m == 1) return 0;
  uint64_t result = 1;
  b %= m;
  while (e > 0) {
    if (e & 1) result = mod_mul(result, b, m);
    b = mod_mul(b, b, m);
    e >>= 1;
  }
  return result;
}

// Inverse of a mod m (m >= 1); domain error unless gcd(a, m) = 1.
inline uint64_t mod_inverse(uint64_t a, uint64_t m) {
  if (m == 0) throw std::invalid_argument("mod_inverse: zero modulus");
  if (m == 1) return 0;
  a %= m;
  int64_t t = 0, new_t = 1;
  uint64_t r = m, new_r = a;
  while (new_r != 0) {
    const uint64_t q = r / new_r;
    const int64_t tmp_t = t - static_cast<int64_t>(q) * new_t;
    t = new_t;
    new_t = tmp_t;
    const uint64_t tmp_r = r - q * new_r;
    r = new_r;
    new_r = tmp_r;
  }
  if (r != 1) throw std::domain_error("mod_inverse: arguments not coprime");
  return t < 0 ? static_cast<uint64_t>(t + static_cast<int64_t>(m)) : static_cast<uint64_t>(t);
}

// Deterministic Miller-Rabin, exact for every 64-bit n.
inline bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set decides primality correctly for all n < 3.3e24.
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = mod_pow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mod_mul(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// Bit sieve for bulk primality queries below a fixed limit. The sampling
// loops draw millions of candidates, where per-query Miller-Rabin dominates
// the runtime; callers doing bulk work build one of these up front.
class PrimeSieve {
 public:
  explicit PrimeSieve(uint64_t limit) : limit_(limit), bits_((limit + 64) / 64, ~0ull) {
    clear(0);
    if (limit >= 1) clear(1);
    for (uint64_t i = 2; i * i <= limit; ++i) {
      if (!test(i)) continue;
      for (uint64_t j = i * i; j <= limit; j += i) clear(j);
    }
  }

  uint64_t limit() const { return limit_; }

  bool is_prime(uint64_t n) const {
    if (n > limit_) throw std::out_of_range("PrimeSieve: query above limit");
    return test(n);
  }

 private:
  bool test(uint64_t n) const { return (bits_[n >> 6] >> (n & 63)) & 1; }
  void clear(uint64_t n) { bits_[n >> 6] &= ~(1ull << (n & 63)); }

  uint64_t limit_;
  std::vector<uint64_t> bits_;
};

namespace detail {

inline bool chain_prime(uint64_t n, const PrimeSieve* sieve) {
  return sieve != nullptr && n <= sieve->limit() ? sieve->is_prime(n) : is_prime(n);
}

inline FactoredInteger merge_primes(std::map<uint64_t, int> acc) {
  FactoredInteger out;
  for (const auto& [p, m] : acc) {
    out.factors.emplace_back(p, m);
    for (int i = 0; i < m; ++i) out.value *= p;
  }
  return out;
}

}  // namespace detail

// Uniform random integer on [1, n_max] together with its prime factorization,
// by self-reducing chains: draw n_max >= s_1 >= s_2 >= ... >= 1 with each
// element uniform on [1, previous], keep the prime elements, and accept their
// product N with probability N / n_max; otherwise restart. Repeated primes in
// one chain multiply in (the output may be non-squarefree).
inline FactoredInteger kalai_sample(uint64_t n_max, RandomSource& rng, const PrimeSieve* sieve = nullptr) {
  if (n_max == 0) throw std::invalid_argument("kalai_sample: n_max must be >= 1");
  for (;;) {
    std::map<uint64_t, int> primes;
    __uint128_t product = 1;
    uint64_t s = 1 + rng.below(n_max);
    while (s > 1) {
      if (detail::chain_prime(s, sieve)) {
        ++primes[s];
        product *= s;
        if (product > n_max) product = static_cast<__uint128_t>(n_max) + 1;  // saturate: already rejected
      }
      s = 1 + rng.below(s);
    }
    if (product <= n_max) {
      const uint64_t n = static_cast<uint64_t>(product);
      if (rng.below(n_max) < n) return detail::merge_primes(std::move(primes));
    }
  }
}

namespace detail {

// Uniform on [1, s_max], returning the factorization of s - 1 alongside s.
// With probability 1/s_max the result is s = 1 (s - 1 = 0 has no
// factorization; an empty list stands in, and 1 is never kept as a prime);
// otherwise s = m + 1 with m drawn by a plain factored sample on [1, s_max-1].
inline std::pair<uint64_t, FactoredInteger> uniform_with_predecessor(uint64_t s_max, RandomSource& rng,
                                                                     const PrimeSieve* sieve) {
  if (s_max == 1 || rng.below(s_max) == 0) return {1, FactoredInteger{}};
  FactoredInteger m = kalai_sample(s_max - 1, rng, sieve);
  return {m.value + 1, std::move(m)};
}

}  // namespace detail

// kalai_sample, but every prime p of the output additionally carries the
// factorization of p - 1 (one extra level, no recursion below that): the
// chain elements are drawn by the offset-by-one trick above, so each prime
// kept arrives with its predecessor already factored.
inline DeepFactoredInteger kalai_sample_deep(uint64_t n_max, RandomSource& rng, const PrimeSieve* sieve = nullptr) {
  if (n_max == 0) throw std::invalid_argument("kalai_sample_deep: n_max must be >= 1");
  for (;;) {
    std::map<uint64_t, std::pair<int, FactoredInteger>> primes;
    __uint128_t product = 1;
    auto [s, pred] = detail::uniform_with_predecessor(n_max, rng, sieve);
    while (s > 1) {
      if (detail::chain_prime(s, sieve)) {
        auto& slot = primes[s];
        if (slot.first == 0) slot.second = pred;
        ++slot.first;
        product *= s;
        if (product > n_max) product = static_cast<__uint128_t>(n_max) + 1;
      }
      std::tie(s, pred) = detail::uniform_with_predecessor(s, rng, sieve);
    }
    if (product <= n_max) {
      const uint64_t n = static_cast<uint64_t>(product);
      if (rng.below(n_max) < n) {
        DeepFactoredInteger out;
        for (auto& [p, slot] : primes) {
          out.outer.factors.emplace_back(p, slot.first);
          for (int i = 0; i < slot.first; ++i) out.outer.value *= p;
          out.predecessor.push_back(std::move(slot.second));
        }
        return out;
      }
    }
  }
}

// Euler's totient of the outer value, returned factored: for N = prod p^m,
// phi(N) = prod p^(m-1) (p - 1), with the (p - 1) factorizations merged in
// from the predecessor lists.
inline FactoredInteger euler_phi_factored(const DeepFactoredInteger& n) {
  if (n.outer.factors.size() != n.predecessor.size())
    throw std::invalid_argument("euler_phi_factored: predecessor list mismatch");
  std::map<uint64_t, int> acc;
  for (size_t i = 0; i < n.outer.factors.size(); ++i) {
    const auto& [p, m] = n.outer.factors[i];
    if (m > 1) acc[p] += m - 1;
    for (const auto& [q, k] : n.predecessor[i].factors) acc[q] += k;
  }
  return detail::merge_primes(std::move(acc));
}

// Multiplicative order of a mod n, given phi = phi(n) factored.
// Requires gcd(a, n) = 1. For each prime power q^lambda of phi, the largest
// tau <= lambda with a^(phi / q^tau) = 1 leaves q^(lambda - tau) in the order.
inline uint64_t multiplicative_order(uint64_t a, uint64_t n, const FactoredInteger& phi) {
  if (n == 0) throw std::invalid_argument("multiplicative_order: zero modulus");
  if (n == 1) return 1;
  a %= n;
  if (std::gcd(a, n) != 1) throw std::domain_error("multiplicative_order: base not coprime to modulus");
  uint64_t order = phi.value;
  for (const auto& [q, lambda] : phi.factors) {
    uint64_t exponent = phi.value;
    for (int tau = 0; tau < lambda; ++tau) {
      exponent /= q;
      if (mod_pow(a, exponent, n) != 1) break;
      order /= q;
    }
  }
  return order;
}

namespace detail {

// Restriction of a deep-factored modulus to the primes not dividing a, i.e.
// the factored form of N / stabilized_gcd.
inline DeepFactoredInteger coprime_part(const DeepFactoredInteger& n, uint64_t a) {
  DeepFactoredInteger out;
  for (size_t i = 0; i < n.outer.factors.size(); ++i) {
    const auto& [p, m] = n.outer.factors[i];
    if (a % p == 0) continue;
    out.outer.factors.emplace_back(p, m);
    for (int k = 0; k < m; ++k) out.outer.value *= p;
    out.predecessor.push_back(n.predecessor[i]);
  }
  return out;
}

}  // namespace detail

// Eventual period of f(x) = a^x mod N for arbitrary a, including bases that
// share factors with the modulus. d_k = gcd(a^k, N) is nondecreasing and
// stabilizes within ceil(log2 N) steps at d; the tail of f is periodic with
// the multiplicative order of a mod N/d, and the preperiod is the first x
// with f(x) = f(x + r). Degenerate bases: a = 0 gives r = 1 with preperiod 1
// (f = 1, 0, 0, ...); a = 1 gives the constant sequence, r = 1, preperiod 0.
inline PeriodStructure ultimate_period(uint64_t a, const DeepFactoredInteger& n) {
  const uint64_t N = n.outer.value;
  if (N == 0) throw std::invalid_argument("ultimate_period: zero modulus");
  if (N == 1) return {1, 0, 1, 0, 1};
  const uint64_t a0 = a % N;
  if (a0 == 0) return {N, 0, 1, 1, N};
  if (a0 == 1) return {N, 1, 1, 0, 1};

  uint64_t d = std::gcd(a0, N);
  for (uint64_t k = 2; k < 66; ++k) {
    const uint64_t next = std::gcd(mod_pow(a0, k, N), N);
    if (next == d) break;
    d = next;
  }
  const uint64_t b = N / d;
  uint64_t r = 1;
  if (b > 1) r = multiplicative_order(a0 % b, b, euler_phi_factored(detail::coprime_part(n, a0)));

  uint64_t x_min = 0;
  if (d > 1) {
    uint64_t fx = 1;
    uint64_t fxr = mod_pow(a0, r, N);
    while (fx != fxr) {
      fx = mod_mul(fx, a0, N);
      fxr = mod_mul(fxr, a0, N);
      ++x_min;
    }
  }
  return {N, a0, r, x_min, d};
}

// Same structure, found without the factorization: Brent cycle detection on
// the iteration v -> v a mod N starting from f(0) = 1 yields the minimal
// cycle length r in O(preperiod + r) multiplications and O(1) memory, then a
// synchronized walk of f(x) and f(x + r) locates the minimal preperiod.
inline PeriodStructure find_period_bruteforce(uint64_t a, uint64_t N) {
  if (N == 0) throw std::invalid_argument("find_period_bruteforce: zero modulus");
  if (N == 1) return {1, 0, 1, 0, 1};
  const uint64_t a0 = a % N;
  const uint64_t start = 1 % N;

  uint64_t power = 1, r = 1;
  uint64_t tortoise = start;
  uint64_t hare = mod_mul(start, a0, N);
  while (tortoise != hare) {
    if (power == r) {
      tortoise = hare;
      power *= 2;
      r = 0;
    }
    hare = mod_mul(hare, a0, N);
    ++r;
  }

  uint64_t x_min = 0;
  uint64_t fx = start;
  uint64_t fxr = mod_pow(a0, r, N);
  while (fx != fxr) {
    fx = mod_mul(fx, a0, N);
    fxr = mod_mul(fxr, a0, N);
    ++x_min;
  }

  const uint64_t d = std::gcd(mod_pow(a0, std::max<uint64_t>(x_min, 1), N), N);
  return {N, a0, r, x_min, d};
}

}  // namespace weaksim
