#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "weaksim/circuit.hpp"
#include "weaksim/clifford.hpp"
#include "weaksim/coset.hpp"
#include "weaksim/distribution.hpp"
#include "weaksim/ht.hpp"
#include "weaksim/io.hpp"
#include "weaksim/oracle.hpp"
#include "weaksim/random.hpp"
#include "weaksim/stats.hpp"

using namespace weaksim;

namespace {

GateCircuit bell_circuit() {
  GateCircuit c;
  c.n_qubits = 2;
  c.gates = {make_h(0), make_cnot(0, 1)};
  return c;
}

}  // namespace

TEST(Tableau, BellPairCorrelations) {
  const StabilizerTableau base = evolve_clifford(bell_circuit());
  RandomSource rng(0xBE11u);
  int64_t ones = 0;
  for (int i = 0; i < 20000; ++i) {
    StabilizerTableau tab = base;
    const uint64_t x = tab.measure_all(rng);
    ASSERT_TRUE(x == 0 || x == 3) << x;
    ones += x == 3;
    tab.check_invariants();
  }
  EXPECT_NEAR(static_cast<double>(ones) / 20000.0, 0.5, 0.02);
}

TEST(Tableau, EmptyCircuitIsDeterministicZero) {
  GateCircuit c;
  c.n_qubits = 5;
  RandomSource rng(0x0u);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(clifford_sample(c, rng), 0u);
}

TEST(Tableau, MatchesStatevectorOnARandomCircuit) {
  GateCircuit c;
  c.n_qubits = 3;
  RandomSource gen(0xC11Fu);
  for (int i = 0; i < 60; ++i) {
    switch (gen.below(3)) {
      case 0: c.gates.push_back(make_h(static_cast<int>(gen.below(3)))); break;
      case 1: c.gates.push_back(make_s(static_cast<int>(gen.below(3)))); break;
      default: {
        const int a = static_cast<int>(gen.below(3));
        int b = a;
        while (b == a) b = static_cast<int>(gen.below(3));
        c.gates.push_back(make_cnot(a, b));
      }
    }
  }
  const ExactDistribution law = simulate(c);
  const StabilizerTableau base = evolve_clifford(c);
  std::vector<int64_t> counts(8, 0);
  RandomSource rng(0x3A8u);
  for (int i = 0; i < 40000; ++i) {
    StabilizerTableau tab = base;
    ++counts[tab.measure_all(rng)];
  }
  EXPECT_GE(chi_square_gof(counts, law).p, 0.001);
}

TEST(Tableau, RejectsNonCliffordGates) {
  GateCircuit c;
  c.n_qubits = 3;
  c.gates = {make_toffoli(0, 1, 2)};
  EXPECT_THROW(evolve_clifford(c), std::invalid_argument);
  GateCircuit c2;
  c2.n_qubits = 2;
  c2.gates = {make_cphase(0.3, 0, 1)};
  EXPECT_THROW(evolve_clifford(c2), std::invalid_argument);
}

TEST(HtWalk, RecognizesTheFamily) {
  EXPECT_TRUE(is_ht_circuit(bell_circuit()));
  GateCircuit tail;
  tail.n_qubits = 2;
  tail.gates = {make_cnot(0, 1), make_h(0)};  // H after a classical gate
  EXPECT_FALSE(is_ht_circuit(tail));
  GateCircuit twice;
  twice.n_qubits = 2;
  twice.gates = {make_h(0), make_h(0)};  // repeated H on one qubit
  EXPECT_FALSE(is_ht_circuit(twice));
  GateCircuit s_gate;
  s_gate.n_qubits = 2;
  s_gate.gates = {make_h(0), make_s(1)};  // S is not classical
  EXPECT_FALSE(is_ht_circuit(s_gate));
  GateCircuit toff;
  toff.n_qubits = 3;
  toff.gates = {make_h(2), make_toffoli(2, 1, 0)};
  EXPECT_TRUE(is_ht_circuit(toff));
}

TEST(HtWalk, BellPairByClassicalPropagation) {
  RandomSource rng(0x47u);
  int64_t ones = 0;
  for (int i = 0; i < 20000; ++i) {
    const uint64_t x = ht_sample(bell_circuit(), rng);
    ASSERT_TRUE(x == 0 || x == 3);
    ones += x == 3;
  }
  EXPECT_NEAR(static_cast<double>(ones) / 20000.0, 0.5, 0.02);
}

TEST(HtWalk, ClassicalOnlyCircuitIsDeterministic) {
  GateCircuit c;
  c.n_qubits = 2;
  c.gates = {make_x(0), make_cnot(0, 1)};
  RandomSource rng(0x0u);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(ht_sample(c, rng), 3u);
}

TEST(HtWalk, MatchesStatevectorWithToffolis) {
  GateCircuit c;
  c.n_qubits = 4;
  c.gates = {make_h(0), make_h(1), make_toffoli(0, 1, 2), make_cnot(2, 3), make_x(0)};
  ASSERT_TRUE(is_ht_circuit(c));
  const ExactDistribution law = simulate(c);
  std::vector<int64_t> counts(16, 0);
  RandomSource rng(0x70FFu);
  for (int i = 0; i < 40000; ++i) ++counts[ht_sample(c, rng)];
  EXPECT_GE(chi_square_gof(counts, law).p, 0.001);
}

TEST(Coset, EnumerationAndSamplingAgree) {
  AbelianGroupSpec g;
  g.moduli = {2, 2};
  g.generators = {{1, 1}};
  g.shift = {0, 1};
  g.validate();
  const auto members = enumerate_coset(g);
  ASSERT_EQ(members.size(), 2u);
  EXPECT_EQ(members[0], (std::vector<uint64_t>{0, 1}));
  EXPECT_EQ(members[1], (std::vector<uint64_t>{1, 0}));

  RandomSource rng(0xC05E7u);
  std::vector<int64_t> counts(2, 0);
  for (int i = 0; i < 20000; ++i) {
    const auto e = coset_sample(g, rng);
    const auto it = std::lower_bound(members.begin(), members.end(), e);
    ASSERT_TRUE(it != members.end() && *it == e);
    ++counts[it - members.begin()];
  }
  EXPECT_GE(chi_square_gof(counts, std::vector<double>{0.5, 0.5}).p, 0.001);
}

TEST(Coset, FullGroupIsUniform) {
  AbelianGroupSpec g;
  g.moduli = {2, 3};
  g.generators = {{1, 0}, {0, 1}};
  g.shift = {0, 0};
  const auto members = enumerate_coset(g);
  ASSERT_EQ(members.size(), 6u);
  RandomSource rng(0xF111u);
  std::vector<int64_t> counts(6, 0);
  for (int i = 0; i < 30000; ++i)
    ++counts[mixed_radix_encode(g.moduli, coset_sample(g, rng))];
  EXPECT_GE(chi_square_gof(counts, std::vector<double>(6, 1.0 / 6.0)).p, 0.001);
}

TEST(Coset, TrivialSubgroupIsAPointMass) {
  AbelianGroupSpec g;
  g.moduli = {5, 7};
  g.shift = {3, 2};
  const auto members = enumerate_coset(g);
  ASSERT_EQ(members.size(), 1u);
  EXPECT_EQ(members[0], (std::vector<uint64_t>{3, 2}));
  RandomSource rng(0x91u);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(coset_sample(g, rng), members[0]);
}

TEST(Coset, MixedRadixEncodingIsInjective) {
  const std::vector<uint64_t> moduli{3, 4, 5};
  std::set<uint64_t> codes;
  std::vector<uint64_t> e(3);
  for (e[0] = 0; e[0] < 3; ++e[0])
    for (e[1] = 0; e[1] < 4; ++e[1])
      for (e[2] = 0; e[2] < 5; ++e[2]) codes.insert(mixed_radix_encode(moduli, e));
  EXPECT_EQ(codes.size(), 60u);
  EXPECT_EQ(*codes.rbegin(), 59u);
}

TEST(Coset, ValidateRejectsMalformedSpecs) {
  AbelianGroupSpec g;
  EXPECT_THROW(g.validate(), std::invalid_argument);  // no moduli
  g.moduli = {4, 0};
  g.shift = {0, 0};
  EXPECT_THROW(g.validate(), std::invalid_argument);  // zero modulus
  g.moduli = {4, 2};
  g.shift = {0};
  EXPECT_THROW(g.validate(), std::invalid_argument);  // shift length
  g.shift = {0, 2};
  EXPECT_THROW(g.validate(), std::invalid_argument);  // shift not reduced
  g.shift = {0, 1};
  g.generators = {{1}};
  EXPECT_THROW(g.validate(), std::invalid_argument);  // generator length
  g.generators = {{1, 1}};
  EXPECT_NO_THROW(g.validate());
}

TEST(GateText, RoundTripsThroughParserAndFormatter) {
  GateCircuit c;
  c.n_qubits = 4;
  c.gates = {make_h(0), make_x(3), make_s(1), make_cz(0, 2),
             make_cnot(1, 3), make_toffoli(0, 1, 2), make_cphase(0.725, 2, 3)};
  std::stringstream text;
  format_gate_list(c, text);
  const GateCircuit back = parse_gate_list(text);
  ASSERT_EQ(back.n_qubits, c.n_qubits);
  ASSERT_EQ(back.gates.size(), c.gates.size());
  for (size_t i = 0; i < c.gates.size(); ++i) {
    EXPECT_EQ(back.gates[i].kind, c.gates[i].kind);
    EXPECT_EQ(back.gates[i].a, c.gates[i].a);
    EXPECT_EQ(back.gates[i].b, c.gates[i].b);
    EXPECT_EQ(back.gates[i].c, c.gates[i].c);
    EXPECT_DOUBLE_EQ(back.gates[i].theta, c.gates[i].theta);
  }
}

TEST(GateText, ParserRejectsMalformedInput) {
  const auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return parse_gate_list(in);
  };
  EXPECT_THROW(parse("qubits 2\nfrobnicate 0\n"), std::invalid_argument);
  EXPECT_THROW(parse("qubits 2\nh 5\n"), std::invalid_argument);
  EXPECT_THROW(parse("qubits 2\ncnot 1 1\n"), std::invalid_argument);
  EXPECT_THROW(parse(""), std::invalid_argument);  // no gates, no QUBITS line
  EXPECT_THROW(parse("# just a comment\n"), std::invalid_argument);
  // Without a QUBITS line the register is sized by the largest index used.
  EXPECT_EQ(parse("h 0\ncnot 0 2\n").n_qubits, 3);
}

TEST(Validation, ChecksGateArguments) {
  GateCircuit c;
  c.n_qubits = 2;
  c.gates = {make_cnot(0, 0)};
  EXPECT_THROW(validate(c), std::invalid_argument);
  c.gates = {make_h(2)};
  EXPECT_THROW(validate(c), std::invalid_argument);
  c.gates = {make_toffoli(0, 1, 1)};
  c.n_qubits = 3;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c.gates = {make_toffoli(0, 1, 2)};
  EXPECT_NO_THROW(validate(c));
}

TEST(PredicateFile, BothFormsParse) {
  std::istringstream direct("x0=11\n");
  size_t size = 99;
  EXPECT_EQ(parse_marked_element(direct, &size), 11u);
  EXPECT_EQ(size, 0u);

  std::istringstream bits("0 0 0 1 0 0 0 0\n");
  EXPECT_EQ(parse_marked_element(bits, &size), 3u);
  EXPECT_EQ(size, 8u);

  std::istringstream none("0 0 0 0\n");
  EXPECT_THROW(parse_marked_element(none), std::invalid_argument);
  std::istringstream two("0 1 1 0\n");
  EXPECT_THROW(parse_marked_element(two), std::invalid_argument);
  std::istringstream mixed("x0=1 0 1\n");
  EXPECT_THROW(parse_marked_element(mixed), std::invalid_argument);
  std::istringstream junk("0 1 banana\n");
  EXPECT_THROW(parse_marked_element(junk), std::invalid_argument);
}

TEST(StreamHeader, KeyValueLines) {
  std::ostringstream os;
  write_stream_header(os, {{"circuit", "grover"}, {"seed", "42"}});
  EXPECT_EQ(os.str(), "# circuit: grover\n# seed: 42\n");
}
