#include <cstdint>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "weaksim/numtheory.hpp"
#include "weaksim/random.hpp"

using namespace weaksim;

namespace {

uint64_t naive_pow(uint64_t b, uint64_t e, uint64_t m) {
  uint64_t acc = 1 % m;
  for (uint64_t i = 0; i < e; ++i) acc = (acc * (b % m)) % m;
  return acc;
}

// Trial-division deep factorization, the independent reference for
// ultimate_period.
FactoredInteger factor_naive(uint64_t n) {
  FactoredInteger out;
  out.value = n;
  for (uint64_t p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      if (!out.factors.empty() && out.factors.back().first == p)
        ++out.factors.back().second;
      else
        out.factors.emplace_back(p, 1);
      n /= p;
    }
  if (n > 1) out.factors.emplace_back(n, 1);
  return out;
}

DeepFactoredInteger deep_naive(uint64_t n) {
  DeepFactoredInteger d;
  d.outer = factor_naive(n);
  for (const auto& [p, m] : d.outer.factors) d.predecessor.push_back(factor_naive(p - 1));
  return d;
}

}  // namespace

TEST(ModArith, PowKnownValues) {
  EXPECT_EQ(mod_pow(2, 10, 1000), 24u);
  EXPECT_EQ(mod_pow(0, 0, 7), 1u);
  EXPECT_EQ(mod_pow(5, 3, 1), 0u);
  EXPECT_EQ(mod_pow(3, 0, 10), 1u);
  EXPECT_EQ(mod_pow(2, 61, (uint64_t{1} << 61) - 1), 1u);  // 2^61 = modulus + 1
}

TEST(ModArith, AgreesWithNaiveExhaustively) {
  for (uint64_t m = 1; m <= 40; ++m)
    for (uint64_t a = 0; a < m + 2; ++a)
      for (uint64_t b = 0; b < m + 2; ++b) {
        EXPECT_EQ(mod_mul(a, b, m), (a * b) % m);
        EXPECT_EQ(mod_pow(a, b, m), naive_pow(a, b, m));
      }
}

TEST(ModArith, MulSurvivesWideOperands) {
  const uint64_t m = 0xFFFFFFFFFFFFFFC5ull;  // largest 64-bit prime
  const uint64_t a = m - 2, b = m - 3;
  EXPECT_EQ(mod_mul(a, b, m), 6u);
}

TEST(ModArith, InverseRoundTrips) {
  for (uint64_t m : {2u, 3u, 5u, 16u, 17u, 255u, 256u, 6561u})
    for (uint64_t a = 1; a < m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      const uint64_t inv = mod_inverse(a, m);
      EXPECT_EQ(mod_mul(a, inv, m), 1u % m);
    }
}

TEST(Primality, KnownCases) {
  EXPECT_FALSE(is_prime(0));
  EXPECT_FALSE(is_prime(1));
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(3));
  EXPECT_FALSE(is_prime(561));   // Carmichael number
  EXPECT_FALSE(is_prime(1729));  // Carmichael number
  EXPECT_TRUE(is_prime(7919));
  EXPECT_FALSE(is_prime(7917));
  EXPECT_TRUE(is_prime((uint64_t{1} << 61) - 1));
  EXPECT_FALSE(is_prime(uint64_t{3215031751}));  // strong pseudoprime to bases 2,3,5,7
}

TEST(Primality, SieveMatchesDirectTest) {
  const PrimeSieve sieve(10000);
  int primes = 0;
  for (uint64_t n = 0; n <= 10000; ++n) {
    EXPECT_EQ(sieve.is_prime(n), is_prime(n)) << n;
    primes += sieve.is_prime(n);
  }
  EXPECT_EQ(primes, 1229);
  EXPECT_THROW(sieve.is_prime(10001), std::out_of_range);
}

TEST(Kalai, SamplesAreFactoredAndInRange) {
  const PrimeSieve sieve(1 << 16);
  RandomSource rng(0xFACE5u);
  for (int i = 0; i < 2000; ++i) {
    const uint64_t n_max = 2 + rng.below(1 << 16);
    const FactoredInteger fi = kalai_sample(n_max, rng, &sieve);
    ASSERT_GE(fi.value, 1u);
    ASSERT_LE(fi.value, n_max);
    uint64_t prod = 1;
    uint64_t last = 1;
    for (const auto& [p, m] : fi.factors) {
      EXPECT_TRUE(is_prime(p)) << p;
      EXPECT_GT(p, last);  // ascending, multiplicity folded into the exponent
      EXPECT_GE(m, 1);
      last = p;
      for (int k = 0; k < m; ++k) prod *= p;
    }
    EXPECT_EQ(prod, fi.value);
  }
}

TEST(Kalai, DeepSamplesFactorEveryPredecessor) {
  const PrimeSieve sieve(1 << 16);
  RandomSource rng(0xBEADu);
  for (int i = 0; i < 500; ++i) {
    const DeepFactoredInteger d = kalai_sample_deep(1 << 12, rng, &sieve);
    ASSERT_EQ(d.predecessor.size(), d.outer.factors.size());
    for (size_t k = 0; k < d.predecessor.size(); ++k) {
      const uint64_t p = d.outer.factors[k].first;
      EXPECT_EQ(d.predecessor[k].value, p - 1);
      uint64_t prod = 1;
      for (const auto& [q, m] : d.predecessor[k].factors)
        for (int j = 0; j < m; ++j) prod *= q;
      EXPECT_EQ(prod, p - 1);
    }
  }
}

TEST(Phi, FactoredTotientKnownValues) {
  const FactoredInteger phi12 = euler_phi_factored(deep_naive(12));
  EXPECT_EQ(phi12.value, 4u);
  ASSERT_EQ(phi12.factors.size(), 1u);
  EXPECT_EQ(phi12.factors[0], (std::pair<uint64_t, int>{2, 2}));

  const FactoredInteger phi7 = euler_phi_factored(deep_naive(7));
  EXPECT_EQ(phi7.value, 6u);
  ASSERT_EQ(phi7.factors.size(), 2u);
  EXPECT_EQ(phi7.factors[0], (std::pair<uint64_t, int>{2, 1}));
  EXPECT_EQ(phi7.factors[1], (std::pair<uint64_t, int>{3, 1}));

  for (uint64_t n = 1; n <= 500; ++n) {
    uint64_t phi = 0;
    for (uint64_t k = 1; k <= n; ++k) phi += std::gcd(k, n) == 1;
    EXPECT_EQ(euler_phi_factored(deep_naive(n)).value, phi) << n;
  }
}

TEST(Order, MatchesBruteForce) {
  EXPECT_EQ(multiplicative_order(2, 7, factor_naive(6)), 3u);
  EXPECT_EQ(multiplicative_order(2, 15, factor_naive(8)), 4u);
  EXPECT_EQ(multiplicative_order(3, 7, factor_naive(6)), 6u);
  for (uint64_t n = 2; n <= 200; ++n) {
    const FactoredInteger phi = euler_phi_factored(deep_naive(n));
    for (uint64_t a = 1; a < n; ++a) {
      if (std::gcd(a, n) != 1) continue;
      uint64_t r = 1, acc = a % n;
      while (acc != 1 % n) {
        acc = mod_mul(acc, a, n);
        ++r;
      }
      EXPECT_EQ(multiplicative_order(a, n, phi), r) << a << " mod " << n;
    }
  }
}

TEST(Period, BruteForceKnownValues) {
  PeriodStructure p = find_period_bruteforce(2, 5);
  EXPECT_EQ(p.period, 4u);
  EXPECT_EQ(p.preperiod, 0u);
  EXPECT_EQ(p.stabilized_gcd, 1u);

  p = find_period_bruteforce(3, 7);
  EXPECT_EQ(p.period, 6u);
  EXPECT_EQ(p.preperiod, 0u);

  p = find_period_bruteforce(2, 4);  // 1, 2, 0, 0, ...
  EXPECT_EQ(p.period, 1u);
  EXPECT_EQ(p.preperiod, 2u);
  EXPECT_EQ(p.stabilized_gcd, 4u);

  p = find_period_bruteforce(2, 12);  // 1, 2, 4, 8, 4, 8, ...
  EXPECT_EQ(p.period, 2u);
  EXPECT_EQ(p.preperiod, 2u);
  EXPECT_EQ(p.stabilized_gcd, 4u);
}

TEST(Period, DegenerateBases) {
  const PeriodStructure unit = find_period_bruteforce(5, 1);
  EXPECT_EQ(unit.period, 1u);
  EXPECT_EQ(unit.preperiod, 0u);

  const PeriodStructure zero = find_period_bruteforce(0, 9);  // 1, 0, 0, ...
  EXPECT_EQ(zero.period, 1u);
  EXPECT_EQ(zero.preperiod, 1u);
  EXPECT_EQ(zero.stabilized_gcd, 9u);

  const PeriodStructure one = find_period_bruteforce(1, 9);
  EXPECT_EQ(one.period, 1u);
  EXPECT_EQ(one.preperiod, 0u);
  EXPECT_EQ(one.stabilized_gcd, 1u);
}

TEST(Period, UltimateAgreesWithBruteForceExhaustively) {
  for (uint64_t n = 1; n <= 200; ++n) {
    const DeepFactoredInteger d = deep_naive(n);
    for (uint64_t a = 0; a <= n; ++a) {
      const PeriodStructure want = find_period_bruteforce(a, n);
      const PeriodStructure got = ultimate_period(a, d);
      EXPECT_EQ(got.period, want.period) << a << " mod " << n;
      EXPECT_EQ(got.preperiod, want.preperiod) << a << " mod " << n;
      EXPECT_EQ(got.stabilized_gcd, want.stabilized_gcd) << a << " mod " << n;
      EXPECT_EQ(got.modulus, want.modulus);
      EXPECT_EQ(got.base, want.base);
    }
  }
}

TEST(Period, SequenceActuallyRepeatsAsClaimed) {
  RandomSource rng(0x9E1Du);
  for (int i = 0; i < 300; ++i) {
    const uint64_t n = 2 + rng.below(5000);
    const uint64_t a = rng.below(n + 1);
    const PeriodStructure p = find_period_bruteforce(a, n);
    const uint64_t probe = p.preperiod + 3 * p.period;
    EXPECT_EQ(mod_pow(a, probe, n), mod_pow(a, probe + p.period, n));
    if (p.preperiod > 0) {
      // Preperiod minimality: one step earlier must not yet be periodic.
      EXPECT_NE(mod_pow(a, p.preperiod - 1, n), mod_pow(a, p.preperiod - 1 + p.period, n));
    }
  }
}
