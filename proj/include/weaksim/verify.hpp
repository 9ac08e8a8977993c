#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "weaksim/circuit.hpp"
#include "weaksim/clifford.hpp"
#include "weaksim/coset.hpp"
#include "weaksim/distribution.hpp"
#include "weaksim/grover.hpp"
#include "weaksim/ht.hpp"
#include "weaksim/numtheory.hpp"
#include "weaksim/oracle.hpp"
#include "weaksim/random.hpp"
#include "weaksim/shor.hpp"
#include "weaksim/stats.hpp"

// The acceptance matrix: every sampler checked against the statevector
// oracle, the closed-form distributions, and the efficiency bounds, at the
// scales the toolkit commits to. Shared by the acceptance test binary and
// `compare --suite full`.

namespace weaksim {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifySummary {
  std::vector<CriterionResult> criteria;
  int stat_checks = 0;
  int stat_retries = 0;

  bool all_pass() const {
    for (const auto& c : criteria)
      if (!c.pass) return false;
    return true;
  }
};

namespace verify_detail {

inline std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

// Statistical checks run at significance 0.001 with a retry-once policy: a
// failing check is rerun once on an independent deterministic stream and
// fails only if it fails twice. Seeds advance by a fixed schedule so the
// stream assignment does not depend on outcomes.
struct StatChecker {
  uint64_t base_seed = 0;
  uint64_t counter = 0;
  int total = 0;
  int retried = 0;
  std::vector<std::string> failures;
  static constexpr double kThreshold = 0.001;

  RandomSource fresh() { return RandomSource(base_seed).derive(counter++); }

  bool require_p(const std::string& label, const std::function<double(RandomSource&)>& pvalue) {
    ++total;
    RandomSource first = fresh();
    RandomSource second = fresh();
    const double p1 = pvalue(first);
    if (p1 >= kThreshold) return true;
    ++retried;
    const double p2 = pvalue(second);
    if (p2 >= kThreshold) return true;
    failures.push_back(label + " (p = " + fmt(p1, 6) + ", retry p = " + fmt(p2, 6) + ")");
    return false;
  }

  // For checks whose failure probability is already negligible (not
  // p-valued): same retry-once schedule.
  bool require_pass(const std::string& label, const std::function<bool(RandomSource&)>& ok) {
    ++total;
    RandomSource first = fresh();
    RandomSource second = fresh();
    if (ok(first)) return true;
    ++retried;
    if (ok(second)) return true;
    failures.push_back(label + " (failed twice)");
    return false;
  }
};

// Chi-square p-value, falling back to an exact support check when the
// expected law is too concentrated to test (fewer than two poolable bins):
// for a (near-)point mass, "every draw landed on a positive-probability
// outcome" is the whole content of distributional equality.
inline double gof_or_support_p(const std::vector<int64_t>& counts, const ExactDistribution& expected) {
  try {
    return chi_square_gof(counts, expected).p;
  } catch (const std::domain_error&) {
    for (size_t x = 0; x < counts.size(); ++x)
      if (counts[x] > 0 && !(expected.probs[x] > 0.0)) return 0.0;
    return 1.0;
  }
}

inline uint64_t pack_outcome(uint64_t x_tilde, uint64_t f, int n_f) { return (x_tilde << n_f) | f; }

// Criteria 1 and 2 share this sweep: exact conditionals against the oracle
// at 1e-9 and a chi-square of the sampled joint at every (a, N, n_x) in the
// stated range, filtered by coprimality.
inline CriterionResult run_shor_sweep(int index, const std::string& name, bool want_coprime,
                                      StatChecker& chk, int64_t samples_per_instance) {
  CriterionResult res{index, name, true, ""};
  double worst_cond_err = 0.0;
  int instances = 0;
  int failed_checks = 0;
  std::string first_bad;

  for (uint64_t N = 2; N <= 32; ++N) {
    for (uint64_t a = 1; a < N; ++a) {
      const bool coprime = std::gcd(a, N) == 1;
      if (coprime != want_coprime) continue;
      const PeriodStructure per = find_period_bruteforce(a, N);
      for (int n_x = 4; n_x <= 8; ++n_x) {
        ++instances;
        ShorPeriodSpec spec;
        spec.a = a;
        spec.N = N;
        spec.n_x = n_x;
        const ExactDistribution joint = simulate(spec);
        const int n_f = joint.n_bits - n_x;
        const uint64_t Q = uint64_t{1} << n_x;

        for (uint64_t x0 : class_representatives(per, Q)) {
          const uint64_t f0 = mod_pow(per.base, x0, per.modulus);
          const auto [cond, weight] = condition_on_low(joint, n_f, f0);
          const ExactDistribution mine = exact_first_register(per, n_x, x0);
          for (uint64_t xt = 0; xt < Q; ++xt)
            worst_cond_err = std::max(worst_cond_err, std::abs(cond.probs[xt] - mine.probs[xt]));
          (void)weight;
        }

        std::ostringstream label;
        label << "joint gof a=" << a << " N=" << N << " n_x=" << n_x;
        const bool ok = chk.require_p(label.str(), [&](RandomSource& rng) {
          const PreparedShor ctx = prepare_shor(per, n_x);
          std::vector<int64_t> counts(joint.size(), 0);
          for (int64_t i = 0; i < samples_per_instance; ++i) {
            const ShorSample s = sample_shor(ctx, rng);
            ++counts[pack_outcome(s.x_tilde, s.f, n_f)];
          }
          return gof_or_support_p(counts, joint);
        });
        if (!ok) {
          ++failed_checks;
          if (first_bad.empty()) first_bad = label.str();
        }
      }
    }
  }

  if (worst_cond_err > 1e-9) {
    res.pass = false;
    res.detail = "conditional mismatch " + fmt(worst_cond_err, 3) + "; ";
  }
  if (failed_checks > 0) {
    res.pass = false;
    res.detail += std::to_string(failed_checks) + " joint checks failed (first: " + first_bad + "); ";
  }
  res.detail += std::to_string(instances) + " instances, worst conditional err " + fmt(worst_cond_err, 3) +
                ", all joints at p >= 0.001 and 1e5 draws";
  return res;
}

inline FactoredInteger factor_with_spf(uint64_t m, const std::vector<uint32_t>& spf) {
  FactoredInteger out;
  out.value = m;
  while (m > 1) {
    const uint64_t p = spf[m];
    int mult = 0;
    while (m % p == 0) {
      m /= p;
      ++mult;
    }
    out.factors.emplace_back(p, mult);
  }
  return out;
}

}  // namespace verify_detail

// Criterion 1: coprime (a, N) sweep, sampler vs oracle.
inline CriterionResult run_criterion1(verify_detail::StatChecker& chk) {
  return verify_detail::run_shor_sweep(1, "shor sampler vs oracle, coprime moduli", true, chk, 100000);
}

// Criterion 2: non-coprime sweep plus the exhaustive preperiod bound and
// period-structure equality for all N <= 4096.
inline CriterionResult run_criterion2(verify_detail::StatChecker& chk) {
  using namespace verify_detail;
  CriterionResult res = run_shor_sweep(2, "shor sampler vs oracle, shared factors", false, chk, 100000);

  constexpr uint64_t kLimit = 4096;
  std::vector<uint32_t> spf(kLimit + 1, 0);
  for (uint64_t i = 2; i <= kLimit; ++i)
    if (spf[i] == 0)
      for (uint64_t j = i; j <= kLimit; j += i)
        if (spf[j] == 0) spf[j] = static_cast<uint32_t>(i);

  uint64_t mismatches = 0, bound_violations = 0, worst_x_min = 0;
  for (uint64_t N = 2; N <= kLimit; ++N) {
    DeepFactoredInteger deep;
    deep.outer = factor_with_spf(N, spf);
    for (const auto& [p, mult] : deep.outer.factors) deep.predecessor.push_back(factor_with_spf(p - 1, spf));
    for (uint64_t a = 1; a < N; ++a) {
      const PeriodStructure brute = find_period_bruteforce(a, N);
      const PeriodStructure derived = ultimate_period(a, deep);
      if (brute.period != derived.period || brute.preperiod != derived.preperiod ||
          brute.stabilized_gcd != derived.stabilized_gcd || brute.modulus != derived.modulus ||
          brute.base != derived.base)
        ++mismatches;
      if ((uint64_t{1} << brute.preperiod) > N) ++bound_violations;
      worst_x_min = std::max(worst_x_min, brute.preperiod);
    }
  }
  if (mismatches > 0 || bound_violations > 0) {
    res.pass = false;
    res.detail += "; EXHAUSTIVE: " + std::to_string(mismatches) + " structure mismatches, " +
                  std::to_string(bound_violations) + " preperiod bound violations";
  } else {
    res.detail += "; exhaustive N <= 4096: period structures agree, preperiod <= log2(N) (max " +
                  std::to_string(worst_x_min) + ")";
  }
  return res;
}

// Criterion 3: rejection-sampler efficiency (proposals-per-accept <= 12 over
// the (M, q) grid) and exactness (chi-square against the rho table).
inline CriterionResult run_criterion3(verify_detail::StatChecker& chk) {
  using namespace verify_detail;
  CriterionResult res{3, "rho rejection sampler: efficiency bound and exactness", true, ""};
  double worst_ppa = 0.0;
  int failed = 0;
  std::string first_bad;

  for (int e = 4; e <= 16; ++e) {
    const uint64_t q = uint64_t{1} << e;
    for (uint64_t M : {uint64_t{1}, uint64_t{2}, q / 2, q - 1}) {
      const RhoParams params = make_rho_params(M, q, 1);

      RandomSource rng = chk.fresh();
      SampleStats st;
      for (int i = 0; i < 20000; ++i) sample_rho(params, rng, &st);
      const double ppa = st.proposals_per_accept();
      worst_ppa = std::max(worst_ppa, ppa);
      if (ppa > 12.0) {
        res.pass = false;
        res.detail += "efficiency bound broken at M=" + std::to_string(M) + " q=" + std::to_string(q) +
                      " (ppa " + fmt(ppa) + "); ";
      }

      if (e <= 12) {
        ExactDistribution table = ExactDistribution::zeros(e);
        for (uint64_t v = 0; v < q; ++v) table.probs[v] = rho(params, v);
        std::ostringstream label;
        label << "rho gof M=" << M << " q=" << q;
        const bool ok = chk.require_p(label.str(), [&](RandomSource& r) {
          std::vector<int64_t> counts(q, 0);
          for (int i = 0; i < 100000; ++i) ++counts[sample_rho(params, r)];
          return gof_or_support_p(counts, table);
        });
        if (!ok) {
          ++failed;
          if (first_bad.empty()) first_bad = label.str();
        }
      }
    }
  }
  if (failed > 0) {
    res.pass = false;
    res.detail += std::to_string(failed) + " distribution checks failed (first: " + first_bad + "); ";
  }
  res.detail += "max proposals-per-accept " + fmt(worst_ppa) + " (bound 12) over q in 2^4..2^16";
  return res;
}

// Criterion 4: the two search samplers agree with each other and with the
// closed form; the attempt budget obeys the quadratic bound on the grid;
// the certain-success edge always returns the marked element; and the
// discrepancy against the statevector circuit is measured and reported.
inline CriterionResult run_criterion4(verify_detail::StatChecker& chk) {
  using namespace verify_detail;
  CriterionResult res{4, "grover samplers: agreement, attempt bound, reported circuit gap", true, ""};

  const int n = 8;
  const int64_t t = 3;
  const uint64_t x0 = 37;
  const bool two_ok = chk.require_p("grover two-sample n=8 t=3", [&](RandomSource& rng) {
    std::vector<int64_t> with_x0(size_t{1} << n, 0), with_oracle(size_t{1} << n, 0);
    const auto f = [&](uint64_t x) { return x == x0 ? -1 : 1; };
    for (int i = 0; i < 100000; ++i) ++with_x0[sample_with_x0(x0, n, t, rng)];
    for (int i = 0; i < 100000; ++i) ++with_oracle[sample_with_oracle(f, n, t, rng).outcome];
    return chi_square_two_sample(with_x0, with_oracle).p;
  });
  if (!two_ok) res.pass = false;

  double worst_ratio = 0.0;
  for (int gn = 8; gn <= 30; ++gn) {
    for (int64_t gt = 1; gt <= 100; ++gt) {
      const int64_t nd = n_draws_required(gn, gt);
      const int64_t bound = draw_bound(gt);
      worst_ratio = std::max(worst_ratio, static_cast<double>(nd) / static_cast<double>(bound));
      if (nd > bound) {
        res.pass = false;
        res.detail += "attempt bound broken at n=" + std::to_string(gn) + " t=" + std::to_string(gt) + "; ";
      }
    }
  }

  const bool certain_ok = chk.require_pass("grover certain success n=2 t=1", [&](RandomSource& rng) {
    const auto f = [](uint64_t x) { return x == 2 ? -1 : 1; };
    for (int i = 0; i < 10000; ++i) {
      if (sample_with_x0(2, 2, 1, rng) != 2) return false;
      if (sample_with_oracle(f, 2, 1, rng).outcome != 2) return false;
    }
    return true;
  });
  if (!certain_ok) res.pass = false;

  std::string gaps;
  for (int dn : {2, 3, 4}) {
    for (int64_t dt : {0, 1}) {
      const uint64_t marked = (uint64_t{1} << dn) - 1;
      const double gap =
          tvd(simulate(CircuitSpec{grover_marked(dn, dt, marked)}), grover_output_distribution(dn, dt, marked));
      gaps += " (n=" + std::to_string(dn) + ",t=" + std::to_string(dt) + "): " + fmt(gap, 3);
    }
  }

  res.detail += "max attempt ratio " + fmt(worst_ratio, 3) +
                " on n in 8..30, t in 1..100; sampler-vs-circuit tvd, reported without threshold:" + gaps;
  return res;
}

// Criterion 5: the superposed-modulus path. Sampled (N, r) pairs match the
// brute-force period structure exactly, N is uniform, and the sampled joint
// meets the oracle within TVD 0.02.
inline CriterionResult run_criterion5(verify_detail::StatChecker& chk) {
  using namespace verify_detail;
  CriterionResult res{5, "superposed-modulus sampler vs oracle", true, ""};
  const uint64_t a = 2;

  int64_t mismatches = 0;
  const int n_N = 6;
  const uint64_t n_max = uint64_t{1} << n_N;
  const bool unif_ok = chk.require_p("superposed N uniformity", [&](RandomSource& rng) {
    mismatches = 0;
    std::vector<int64_t> counts(n_max, 0);
    for (int i = 0; i < 100000; ++i) {
      const DeepFactoredInteger deep = kalai_sample_deep(n_max, rng);
      const PeriodStructure derived = ultimate_period(a, deep);
      const PeriodStructure brute = find_period_bruteforce(a, deep.outer.value);
      if (derived.period != brute.period || derived.preperiod != brute.preperiod ||
          derived.stabilized_gcd != brute.stabilized_gcd)
        ++mismatches;
      ++counts[deep.outer.value - 1];
    }
    if (mismatches > 0) return 0.0;
    ExactDistribution unif = ExactDistribution::zeros(n_N);
    for (auto& p : unif.probs) p = 1.0 / static_cast<double>(n_max);
    return chi_square_gof(counts, unif).p;
  });
  if (!unif_ok) res.pass = false;
  if (mismatches > 0) {
    res.pass = false;
    res.detail += std::to_string(mismatches) + " (N, r) mismatches vs brute force; ";
  }

  ShorSuperposedNSpec spec;
  spec.a = a;
  spec.n_N = 3;
  spec.n_x = 4;
  const ExactDistribution joint = simulate(spec);
  const int n_f = 3;
  RandomSource rng = chk.fresh();
  std::vector<int64_t> counts(joint.size(), 0);
  for (int i = 0; i < 100000; ++i) {
    const SuperposedSample s = sample_superposed_n(a, 3, 4, rng);
    ++counts[((s.N & 7) << (4 + n_f)) | (s.x_tilde << n_f) | s.f];
  }
  const double joint_tvd = tvd_counts(counts, joint);
  if (joint_tvd >= 0.02) {
    res.pass = false;
    res.detail += "joint tvd " + fmt(joint_tvd) + " >= 0.02; ";
  }
  res.detail += "1e5 (N, r) pairs match brute force; N uniform on 1..64; joint tvd " + fmt(joint_tvd, 3) +
                " < 0.02 at n_N=3 n_x=4";
  return res;
}

// Criterion 6: random factored integers. Factorizations are exact on 1e6
// draws at n_max = 2^20 and the value is uniform at small n_max.
inline CriterionResult run_criterion6(verify_detail::StatChecker& chk) {
  using namespace verify_detail;
  CriterionResult res{6, "random factored integers", true, ""};

  const uint64_t n_max = uint64_t{1} << 20;
  const PrimeSieve sieve(n_max);
  int64_t violations = 0;
  RandomSource rng = chk.fresh();
  for (int64_t i = 0; i < 1000000; ++i) {
    const FactoredInteger fi = kalai_sample(n_max, rng, &sieve);
    if (fi.value < 1 || fi.value > n_max) ++violations;
    __uint128_t prod = 1;
    uint64_t prev = 1;
    for (const auto& [p, mult] : fi.factors) {
      if (p <= prev || !is_prime(p)) ++violations;
      prev = p;
      for (int m = 0; m < mult; ++m) prod *= p;
    }
    if (prod != fi.value) ++violations;
  }
  if (violations > 0) {
    res.pass = false;
    res.detail += std::to_string(violations) + " factorization violations; ";
  }

  int failed = 0;
  for (uint64_t small : {uint64_t{2}, uint64_t{10}, uint64_t{30}}) {
    std::ostringstream label;
    label << "kalai uniformity n_max=" << small;
    const bool ok = chk.require_p(label.str(), [&](RandomSource& r) {
      std::vector<int64_t> counts(small, 0);
      for (int i = 0; i < 100000; ++i) ++counts[kalai_sample(small, r).value - 1];
      const std::vector<double> unif(small, 1.0 / static_cast<double>(small));
      return chi_square_gof(counts, unif).p;
    });
    if (!ok) ++failed;
  }
  if (failed > 0) {
    res.pass = false;
    res.detail += std::to_string(failed) + " uniformity checks failed; ";
  }
  res.detail += "1e6 draws at n_max=2^20 with exact factorizations; uniform at n_max in {2,10,30}";
  return res;
}

namespace verify_detail {

inline GateCircuit random_ht_circuit(RandomSource& rng) {
  GateCircuit c;
  c.n_qubits = 2 + static_cast<int>(rng.below(7));  // 2..8
  for (int q = 0; q < c.n_qubits; ++q)
    if (rng.coin()) c.gates.push_back(make_h(q));
  const int classical = static_cast<int>(rng.below(31));
  for (int i = 0; i < classical; ++i) {
    const int kind = c.n_qubits >= 3 ? static_cast<int>(rng.below(3)) : static_cast<int>(rng.below(2));
    const int q1 = static_cast<int>(rng.below(static_cast<uint64_t>(c.n_qubits)));
    if (kind == 0) {
      c.gates.push_back(make_x(q1));
    } else if (kind == 1) {
      int q2 = static_cast<int>(rng.below(static_cast<uint64_t>(c.n_qubits)));
      while (q2 == q1) q2 = static_cast<int>(rng.below(static_cast<uint64_t>(c.n_qubits)));
      c.gates.push_back(make_cnot(q1, q2));
    } else {
      int q2 = q1, q3 = q1;
      while (q2 == q1) q2 = static_cast<int>(rng.below(static_cast<uint64_t>(c.n_qubits)));
      while (q3 == q1 || q3 == q2) q3 = static_cast<int>(rng.below(static_cast<uint64_t>(c.n_qubits)));
      c.gates.push_back(make_toffoli(q1, q2, q3));
    }
  }
  return c;
}

inline GateCircuit random_clifford_circuit(RandomSource& rng) {
  GateCircuit c;
  c.n_qubits = 2 + static_cast<int>(rng.below(5));  // 2..6
  const int depth = 1 + static_cast<int>(rng.below(40));
  for (int i = 0; i < depth; ++i) {
    const int kind = static_cast<int>(rng.below(3));
    const int q1 = static_cast<int>(rng.below(static_cast<uint64_t>(c.n_qubits)));
    if (kind == 0) {
      c.gates.push_back(make_h(q1));
    } else if (kind == 1) {
      c.gates.push_back(make_s(q1));
    } else {
      int q2 = q1;
      while (q2 == q1) q2 = static_cast<int>(rng.below(static_cast<uint64_t>(c.n_qubits)));
      c.gates.push_back(make_cnot(q1, q2));
    }
  }
  return c;
}

inline AbelianGroupSpec random_coset_instance(RandomSource& rng) {
  for (;;) {
    AbelianGroupSpec spec;
    const size_t k = 1 + rng.below(3);
    uint64_t order = 1;
    for (size_t i = 0; i < k; ++i) {
      const uint64_t d = 1 + rng.below(8);
      spec.moduli.push_back(d);
      order *= d;
    }
    if (order > 64 || order < 2) continue;
    const size_t gens = 1 + rng.below(2);
    for (size_t j = 0; j < gens; ++j) {
      std::vector<uint64_t> g;
      for (uint64_t d : spec.moduli) g.push_back(rng.below(d));
      spec.generators.push_back(std::move(g));
    }
    for (uint64_t d : spec.moduli) spec.shift.push_back(rng.below(d));
    if (enumerate_coset(spec).size() >= 2) return spec;
  }
}

}  // namespace verify_detail

// Criterion 7: the tractable families. Random HT and Clifford circuits
// against the statevector oracle, and coset sampling uniformity.
inline CriterionResult run_criterion7(verify_detail::StatChecker& chk) {
  using namespace verify_detail;
  CriterionResult res{7, "ht, clifford, and coset samplers", true, ""};
  int failed = 0;
  std::string first_bad;

  for (int i = 0; i < 50; ++i) {
    RandomSource gen = chk.fresh();
    const GateCircuit c = random_ht_circuit(gen);
    const ExactDistribution d = simulate(CircuitSpec{c});
    std::ostringstream label;
    label << "ht circuit " << i << " (n=" << c.n_qubits << ", m=" << c.gates.size() << ")";
    const bool ok = chk.require_p(label.str(), [&](RandomSource& rng) {
      std::vector<int64_t> counts(d.size(), 0);
      for (int s = 0; s < 100000; ++s) ++counts[ht_sample(c, rng)];
      return gof_or_support_p(counts, d);
    });
    if (!ok && first_bad.empty()) first_bad = label.str();
    failed += !ok;
  }

  for (int i = 0; i < 50; ++i) {
    RandomSource gen = chk.fresh();
    const GateCircuit c = random_clifford_circuit(gen);
    const ExactDistribution d = simulate(CircuitSpec{c});
    const StabilizerTableau base = evolve_clifford(c);
    if (!base.check_invariants()) {
      res.pass = false;
      res.detail += "tableau symplectic invariant broken; ";
    }
    std::ostringstream label;
    label << "clifford circuit " << i << " (n=" << c.n_qubits << ", m=" << c.gates.size() << ")";
    const bool ok = chk.require_p(label.str(), [&](RandomSource& rng) {
      std::vector<int64_t> counts(d.size(), 0);
      for (int s = 0; s < 100000; ++s) {
        StabilizerTableau tab = base;
        ++counts[tab.measure_all(rng)];
      }
      return gof_or_support_p(counts, d);
    });
    if (!ok && first_bad.empty()) first_bad = label.str();
    failed += !ok;
  }

  for (int i = 0; i < 20; ++i) {
    RandomSource gen = chk.fresh();
    const AbelianGroupSpec spec = random_coset_instance(gen);
    const auto members = enumerate_coset(spec);
    std::ostringstream label;
    label << "coset instance " << i << " (|coset|=" << members.size() << ")";
    const bool ok = chk.require_p(label.str(), [&](RandomSource& rng) {
      std::vector<int64_t> counts(members.size(), 0);
      for (int s = 0; s < 100000; ++s) {
        const auto e = coset_sample(spec, rng);
        const auto it = std::lower_bound(members.begin(), members.end(), e);
        if (it == members.end() || *it != e) return 0.0;  // outside the coset
        ++counts[static_cast<size_t>(it - members.begin())];
      }
      const std::vector<double> unif(members.size(), 1.0 / static_cast<double>(members.size()));
      return chi_square_gof(counts, unif).p;
    });
    if (!ok && first_bad.empty()) first_bad = label.str();
    failed += !ok;
  }

  if (failed > 0) {
    res.pass = false;
    res.detail += std::to_string(failed) + " family checks failed (first: " + first_bad + "); ";
  }
  res.detail += "50 ht + 50 clifford circuits vs oracle, 20 coset instances uniform, 1e5 draws each";
  return res;
}

// Criterion 8: the inverse-transform baseline reproduces oracle
// distributions given the full probability table.
inline CriterionResult run_criterion8(verify_detail::StatChecker& chk) {
  using namespace verify_detail;
  CriterionResult res{8, "inverse-transform baseline vs oracle tables", true, ""};

  std::vector<std::pair<std::string, ExactDistribution>> cases;
  {
    ShorPeriodSpec s1;
    s1.a = 2;
    s1.N = 7;
    s1.n_x = 5;
    cases.emplace_back("period-finding joint a=2 N=7", simulate(s1));
    ShorSuperposedNSpec s2;
    s2.a = 2;
    s2.n_N = 3;
    s2.n_x = 4;
    cases.emplace_back("superposed joint n_N=3 n_x=4", simulate(s2));
    cases.emplace_back("search circuit n=3 t=1", simulate(CircuitSpec{grover_marked(3, 1, 5)}));
    GateCircuit c;
    c.n_qubits = 4;
    c.gates = {make_h(0), make_h(1), make_h(2),         make_cphase(0.7, 0, 3), make_cnot(1, 3),
               make_s(3), make_h(3), make_cz(2, 3),     make_cnot(0, 2),        make_h(1)};
    cases.emplace_back("mixed gate list n=4", simulate(CircuitSpec{c}));
  }

  int failed = 0;
  for (const auto& [name, dist] : cases) {
    const bool ok = chk.require_p("inverse transform: " + name, [&](RandomSource& rng) {
      std::vector<int64_t> counts(dist.size(), 0);
      for (int i = 0; i < 100000; ++i) ++counts[inverse_transform_sample(dist, rng)];
      return gof_or_support_p(counts, dist);
    });
    if (!ok) ++failed;
  }
  if (failed > 0) {
    res.pass = false;
    res.detail += std::to_string(failed) + " baseline checks failed; ";
  }
  res.detail += std::to_string(cases.size()) + " oracle tables reproduced at p >= 0.001, 1e5 draws each";
  return res;
}

// Runs the whole acceptance matrix. Deterministic given base_seed; each
// criterion prints its line to `log` as it completes.
inline VerifySummary run_acceptance(uint64_t base_seed = 0x51AB1E5EEDull, std::ostream* log = nullptr) {
  verify_detail::StatChecker chk;
  chk.base_seed = base_seed;
  VerifySummary summary;
  const auto emit = [&](CriterionResult r) {
    if (log)
      (*log) << "criterion " << r.index << " [" << (r.pass ? "PASS" : "FAIL") << "] " << r.name << ": "
             << r.detail << "\n"
             << std::flush;
    summary.criteria.push_back(std::move(r));
  };
  emit(run_criterion1(chk));
  emit(run_criterion2(chk));
  emit(run_criterion3(chk));
  emit(run_criterion4(chk));
  emit(run_criterion5(chk));
  emit(run_criterion6(chk));
  emit(run_criterion7(chk));
  emit(run_criterion8(chk));
  summary.stat_checks = chk.total;
  summary.stat_retries = chk.retried;
  if (log) {
    (*log) << "statistical checks: " << summary.stat_checks << ", retried once: " << summary.stat_retries
           << "\n";
    for (const auto& f : chk.failures) (*log) << "  failed check: " << f << "\n";
  }
  return summary;
}

}  // namespace weaksim
