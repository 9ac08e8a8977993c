// Command-line front end: exact distributions, sample streams, sampler
// verification, bound benchmarks, and random factored integers.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "weaksim/circuit.hpp"
#include "weaksim/clifford.hpp"
#include "weaksim/coset.hpp"
#include "weaksim/distribution.hpp"
#include "weaksim/grover.hpp"
#include "weaksim/ht.hpp"
#include "weaksim/io.hpp"
#include "weaksim/numtheory.hpp"
#include "weaksim/oracle.hpp"
#include "weaksim/random.hpp"
#include "weaksim/shor.hpp"
#include "weaksim/stats.hpp"
#include "weaksim/verify.hpp"

namespace {

using nlohmann::json;
using namespace weaksim;

constexpr uint64_t kSuiteSeed = 0x51AB1E5EEDull;
constexpr double kSignificance = 0.001;
constexpr double kExactTol = 1e-9;

struct Cli {
  std::string circuit;
  uint64_t a = 2;
  uint64_t N = 15;
  int n_x = 8;
  int n_N = 3;
  int n_f = 0;
  int n = 4;
  int64_t t = 1;
  uint64_t x0 = 0;
  bool has_x0 = false;
  std::string file;
  std::string moduli;
  std::string gens;
  std::string shift;
  int64_t count = -1;
  uint64_t seed = 0;
  bool has_seed = false;
  uint64_t n_max = uint64_t{1} << 20;
  std::string method = "auto";     // auto | formula | oracle
  std::string proposal = "fast";   // fast | reference
  std::string against = "oracle";  // oracle | paper
  std::string suite;
  std::string out;
  std::string format;  // json | tsv; per-command default
  bool sparse = false;
  bool joint = false;
  bool marginal = false;
  bool deep = false;
  bool timing = false;
};

struct OutStream {
  std::ofstream file;
  std::ostream* os = &std::cout;
};

OutStream open_output(const std::string& path) {
  OutStream o;
  if (!path.empty()) {
    o.file.open(path);
    if (!o.file) throw std::invalid_argument("cannot open output file: " + path);
    o.os = &o.file;
  }
  return o;
}

uint64_t resolve_seed(const Cli& c) {
  if (c.has_seed) return c.seed;
  std::random_device rd;
  return (static_cast<uint64_t>(rd()) << 32) ^ static_cast<uint64_t>(rd());
}

std::vector<uint64_t> parse_u64_list(const std::string& text, char sep = ',') {
  std::vector<uint64_t> values;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, sep)) {
    if (token.empty()) throw std::invalid_argument("empty entry in list: " + text);
    size_t pos = 0;
    values.push_back(std::stoull(token, &pos));
    if (pos != token.size()) throw std::invalid_argument("bad integer in list: " + token);
  }
  if (values.empty()) throw std::invalid_argument("empty list");
  return values;
}

AbelianGroupSpec parse_group(const Cli& c) {
  if (c.moduli.empty()) throw std::invalid_argument("--moduli is required for coset circuits");
  AbelianGroupSpec spec;
  spec.moduli = parse_u64_list(c.moduli);
  if (!c.gens.empty()) {
    std::istringstream in(c.gens);
    std::string part;
    while (std::getline(in, part, ';')) spec.generators.push_back(parse_u64_list(part));
  }
  spec.shift = c.shift.empty() ? std::vector<uint64_t>(spec.moduli.size(), 0) : parse_u64_list(c.shift);
  spec.validate();
  return spec;
}

GateCircuit load_circuit(const Cli& c) {
  if (c.file.empty()) throw std::invalid_argument("--file is required for gate-list circuits");
  std::ifstream in(c.file);
  if (!in) throw std::invalid_argument("cannot open circuit file: " + c.file);
  GateCircuit circuit = parse_gate_list(in);
  if (c.circuit == "ht" && !is_ht_circuit(circuit))
    throw std::invalid_argument("--circuit ht: file is not a Hadamard-then-classical circuit");
  if (c.circuit == "clifford")
    for (const Gate& g : circuit.gates)
      if (g.kind != GateKind::kH && g.kind != GateKind::kS && g.kind != GateKind::kCNOT)
        throw std::invalid_argument("--circuit clifford: only H, S, CNOT are allowed");
  return circuit;
}

bool circuit_is_clifford(const GateCircuit& circuit) {
  for (const Gate& g : circuit.gates)
    if (g.kind != GateKind::kH && g.kind != GateKind::kS && g.kind != GateKind::kCNOT) return false;
  return true;
}

// Routing for measured gate lists: classical propagation when the circuit is
// Hadamards-then-classical, tableau when it is Clifford, otherwise the
// inverse-transform baseline over the statevector table (cap-limited).
std::string route_gatelist(const GateCircuit& circuit) {
  if (is_ht_circuit(circuit)) return "ht";
  if (circuit_is_clifford(circuit)) return "tableau";
  return "inverse-transform";
}

ProposalMethod parse_proposal(const std::string& name) {
  if (name == "fast") return ProposalMethod::kFast;
  if (name == "reference") return ProposalMethod::kReference;
  throw std::invalid_argument("unknown proposal method: " + name);
}

int f_width(uint64_t N) {
  return N > 1 ? std::max(1, 64 - std::countl_zero(N - 1)) : 1;
}

uint64_t grover_x0(const Cli& c) {
  if (c.has_x0) return c.x0;
  if (!c.file.empty()) {
    std::ifstream in(c.file);
    if (!in) throw std::invalid_argument("cannot open marked-element file: " + c.file);
    size_t size = 0;
    const uint64_t x0 = parse_marked_element(in, &size);
    if (size != 0 && size != size_t{1} << c.n)
      throw std::invalid_argument("marked-element vector length does not match 2^n");
    return x0;
  }
  return (uint64_t{1} << c.n) - 1;  // documented default
}

// Closed-form joint of the superposed-modulus circuit: uniform mixture over
// N of the per-modulus closed-form joints, packed like the oracle.
ExactDistribution superposed_formula(uint64_t a, int n_N, int n_x, int n_f) {
  const uint64_t count = uint64_t{1} << n_N;
  const uint64_t mask = count - 1;
  ExactDistribution d = ExactDistribution::zeros(n_N + n_x + n_f);
  const double w = 1.0 / static_cast<double>(count);
  for (uint64_t N = 1; N <= count; ++N) {
    const ExactDistribution branch = exact_joint(find_period_bruteforce(a, N), n_x, n_f);
    const uint64_t base = (N & mask) << (n_x + n_f);
    for (size_t i = 0; i < branch.size(); ++i) d.probs[base | i] += w * branch.probs[i];
  }
  return d;
}

void emit_distribution(std::ostream& os, const ExactDistribution& d, const std::string& format,
                       bool sparse) {
  if (format == "json") {
    os << distribution_to_json(d, sparse).dump(2) << "\n";
    return;
  }
  os << "# n_bits: " << d.n_bits << "\n";
  os << std::setprecision(17);
  for (size_t x = 0; x < d.size(); ++x)
    if (!sparse || d.probs[x] > 1e-15) os << x << "\t" << d.probs[x] << "\n";
}

// ---- exact -------------------------------------------------------------

int cmd_exact(const Cli& c) {
  OutStream o = open_output(c.out);
  std::ostream& os = *o.os;
  ExactDistribution d;

  if (c.circuit == "shor") {
    const bool formula = c.method != "oracle";
    if (formula) {
      const PeriodStructure per = find_period_bruteforce(c.a, c.N);
      d = c.joint ? exact_joint(per, c.n_x, c.n_f > 0 ? c.n_f : f_width(c.N))
                  : first_register_marginal(per, c.n_x);
    } else {
      ShorPeriodSpec spec;
      spec.a = c.a;
      spec.N = c.N;
      spec.n_x = c.n_x;
      spec.n_f = c.n_f;
      d = simulate(spec);
      if (c.marginal) d = marginal_high(d, c.n_x);
    }
  } else if (c.circuit == "shor-superposed") {
    const int nf = c.n_f > 0 ? c.n_f : c.n_N;
    if (c.method != "oracle") {
      d = superposed_formula(c.a, c.n_N, c.n_x, nf);
    } else {
      ShorSuperposedNSpec spec;
      spec.a = c.a;
      spec.n_N = c.n_N;
      spec.n_x = c.n_x;
      spec.n_f = c.n_f;
      d = simulate(spec);
    }
    if (c.marginal) d = marginal_high(marginal_low(d, c.n_x + nf), c.n_x);
  } else if (c.circuit == "grover") {
    const uint64_t x0 = grover_x0(c);
    d = c.method == "oracle" ? simulate(grover_marked(c.n, c.t, x0))
                             : grover_output_distribution(c.n, c.t, x0);
  } else if (c.circuit == "coset") {
    const AbelianGroupSpec g = parse_group(c);
    const auto members = enumerate_coset(g);
    uint64_t space = 1;
    for (uint64_t m : g.moduli) {
      if (space > (uint64_t{1} << 30) / m) throw std::invalid_argument("coset: group too large for a dense table");
      space *= m;
    }
    const int bits = space > 1 ? static_cast<int>(std::bit_width(space - 1)) : 1;
    d = ExactDistribution::zeros(bits);
    for (const auto& e : members)
      d.probs[mixed_radix_encode(g.moduli, e)] = 1.0 / static_cast<double>(members.size());
  } else if (c.circuit == "gatelist" || c.circuit == "clifford" || c.circuit == "ht") {
    if (c.method == "formula")
      throw std::invalid_argument("gate-list circuits have no closed form; use --method oracle");
    d = simulate(load_circuit(c));
  } else {
    throw std::invalid_argument("unknown circuit: " + c.circuit);
  }

  emit_distribution(os, d, c.format.empty() ? "json" : c.format, c.sparse);
  return 0;
}

// ---- sample ------------------------------------------------------------

int cmd_sample(const Cli& c) {
  OutStream o = open_output(c.out);
  std::ostream& os = *o.os;
  const uint64_t seed = resolve_seed(c);
  const int64_t count = c.count < 0 ? 10 : c.count;
  const RandomSource root(seed);
  const bool jsonl = c.format == "json";

  std::vector<std::pair<std::string, std::string>> header;
  header.emplace_back("circuit", c.circuit);

  if (c.circuit == "shor") {
    const PeriodStructure per = find_period_bruteforce(c.a, c.N);
    const PreparedShor ctx = prepare_shor(per, c.n_x);
    const ProposalMethod pm = parse_proposal(c.proposal);
    std::ostringstream input;
    input << "r=" << per.period << " x_min=" << per.preperiod << " d=" << per.stabilized_gcd
          << " n_x=" << c.n_x;
    header.emplace_back("a", std::to_string(c.a));
    header.emplace_back("N", std::to_string(c.N));
    header.emplace_back("input", input.str());
    header.emplace_back("proposal", c.proposal);
    header.emplace_back("seed", std::to_string(seed));
    header.emplace_back("count", std::to_string(count));
    header.emplace_back("columns", "x_tilde f");
    write_stream_header(os, header);
    for (int64_t i = 0; i < count; ++i) {
      RandomSource sub = root.derive(static_cast<uint64_t>(i));
      const ShorSample s = sample_shor(ctx, sub, nullptr, pm);
      if (jsonl)
        os << json{{"x_tilde", s.x_tilde}, {"f", s.f}}.dump() << "\n";
      else
        os << s.x_tilde << "\t" << s.f << "\n";
    }
    return 0;
  }

  if (c.circuit == "shor-superposed") {
    const ProposalMethod pm = parse_proposal(c.proposal);
    std::ostringstream input;
    input << "a=" << c.a << " n_N=" << c.n_N << " n_x=" << c.n_x;
    header.emplace_back("input", input.str());
    header.emplace_back("proposal", c.proposal);
    header.emplace_back("seed", std::to_string(seed));
    header.emplace_back("count", std::to_string(count));
    header.emplace_back("columns", "N x_tilde f");
    write_stream_header(os, header);
    for (int64_t i = 0; i < count; ++i) {
      RandomSource sub = root.derive(static_cast<uint64_t>(i));
      const SuperposedSample s = sample_superposed_n(c.a, c.n_N, c.n_x, sub, nullptr, nullptr, pm);
      if (jsonl)
        os << json{{"N", s.N}, {"x_tilde", s.x_tilde}, {"f", s.f}}.dump() << "\n";
      else
        os << s.N << "\t" << s.x_tilde << "\t" << s.f << "\n";
    }
    return 0;
  }

  if (c.circuit == "grover") {
    const uint64_t x0 = grover_x0(c);
    const bool oracle_draws = c.method == "oracle";
    std::ostringstream input;
    input << "n=" << c.n << " t=" << c.t << " x0=" << x0;
    header.emplace_back("input", input.str());
    header.emplace_back("sampler", oracle_draws ? "oracle-queries" : "marked-element");
    header.emplace_back("n_draws", std::to_string(n_draws_required(c.n, c.t)));
    header.emplace_back("seed", std::to_string(seed));
    header.emplace_back("count", std::to_string(count));
    header.emplace_back("columns", "x");
    write_stream_header(os, header);
    const auto f = [&](uint64_t x) { return x == x0 ? -1 : 1; };
    for (int64_t i = 0; i < count; ++i) {
      RandomSource sub = root.derive(static_cast<uint64_t>(i));
      const uint64_t x = oracle_draws ? sample_with_oracle(f, c.n, c.t, sub).outcome
                                      : sample_with_x0(x0, c.n, c.t, sub);
      if (jsonl)
        os << json{{"x", x}}.dump() << "\n";
      else
        os << x << "\n";
    }
    return 0;
  }

  if (c.circuit == "coset") {
    const AbelianGroupSpec g = parse_group(c);
    header.emplace_back("input", "moduli=" + c.moduli + " gens=" + c.gens + " shift=" +
                                     (c.shift.empty() ? std::string("0") : c.shift));
    header.emplace_back("seed", std::to_string(seed));
    header.emplace_back("count", std::to_string(count));
    header.emplace_back("columns", "components");
    write_stream_header(os, header);
    for (int64_t i = 0; i < count; ++i) {
      RandomSource sub = root.derive(static_cast<uint64_t>(i));
      const auto e = coset_sample(g, sub);
      if (jsonl) {
        os << json{{"element", e}}.dump() << "\n";
      } else {
        for (size_t k = 0; k < e.size(); ++k) os << (k ? "\t" : "") << e[k];
        os << "\n";
      }
    }
    return 0;
  }

  if (c.circuit == "gatelist" || c.circuit == "clifford" || c.circuit == "ht") {
    const GateCircuit circuit = load_circuit(c);
    const std::string route = c.circuit == "gatelist" ? route_gatelist(circuit)
                              : c.circuit == "ht"     ? std::string("ht")
                                                      : std::string("tableau");
    header.emplace_back("file", c.file);
    header.emplace_back("input", "n=" + std::to_string(circuit.n_qubits) +
                                     " m=" + std::to_string(circuit.gates.size()));
    header.emplace_back("sampler", route);
    header.emplace_back("seed", std::to_string(seed));
    header.emplace_back("count", std::to_string(count));
    header.emplace_back("columns", "x");
    write_stream_header(os, header);

    ExactDistribution table;  // only for the inverse-transform fallback
    StabilizerTableau base(1);
    if (route == "inverse-transform") table = simulate(circuit);
    if (route == "tableau") base = evolve_clifford(circuit);
    for (int64_t i = 0; i < count; ++i) {
      RandomSource sub = root.derive(static_cast<uint64_t>(i));
      uint64_t x = 0;
      if (route == "ht") {
        x = ht_sample(circuit, sub);
      } else if (route == "tableau") {
        StabilizerTableau tab = base;
        x = tab.measure_all(sub);
      } else {
        x = inverse_transform_sample(table, sub);
      }
      if (jsonl)
        os << json{{"x", x}}.dump() << "\n";
      else
        os << x << "\n";
    }
    return 0;
  }

  throw std::invalid_argument("unknown circuit: " + c.circuit);
}

// ---- compare -----------------------------------------------------------

json gof_or_support(const std::vector<int64_t>& counts, const ExactDistribution& target, bool* pass) {
  try {
    const GofReport g = chi_square_gof(counts, target);
    *pass = g.p >= kSignificance;
    return gof_to_json(g);
  } catch (const std::domain_error&) {
    bool ok = true;
    for (size_t x = 0; x < counts.size(); ++x)
      if (counts[x] > 0 && !(target.probs[x] > 0.0)) ok = false;
    *pass = ok;
    return json{{"support_only", true}, {"support_ok", ok}};
  }
}

int cmd_compare(const Cli& c) {
  if (c.suite == "full") {
    const uint64_t seed = c.has_seed ? c.seed : kSuiteSeed;
    std::cout << "acceptance suite, seed " << seed << "\n";
    const VerifySummary s = run_acceptance(seed, &std::cout);
    std::cout << (s.all_pass() ? "acceptance: ALL PASS" : "acceptance: FAIL") << "\n";
    return s.all_pass() ? 0 : 1;
  }
  if (!c.suite.empty()) throw std::invalid_argument("unknown suite: " + c.suite);
  if (c.circuit.empty()) throw std::invalid_argument("compare needs --circuit or --suite full");

  OutStream o = open_output(c.out);
  std::ostream& os = *o.os;
  const uint64_t seed = resolve_seed(c);
  const int64_t count = c.count < 0 ? 100000 : c.count;
  const RandomSource root(seed);

  json report;
  report["circuit"] = c.circuit;
  report["against"] = c.against;
  report["count"] = count;
  report["seed"] = seed;
  bool pass = true;

  if (c.circuit == "shor" || c.circuit == "shor-superposed") {
    const ProposalMethod pm = parse_proposal(c.proposal);
    ExactDistribution formula, oracle;
    std::vector<int64_t> counts;
    if (c.circuit == "shor") {
      const PeriodStructure per = find_period_bruteforce(c.a, c.N);
      const int nf = c.n_f > 0 ? c.n_f : f_width(c.N);
      formula = exact_joint(per, c.n_x, nf);
      ShorPeriodSpec spec;
      spec.a = c.a;
      spec.N = c.N;
      spec.n_x = c.n_x;
      spec.n_f = nf;
      oracle = simulate(spec);
      const PreparedShor ctx = prepare_shor(per, c.n_x);
      counts.assign(formula.size(), 0);
      for (int64_t i = 0; i < count; ++i) {
        RandomSource sub = root.derive(static_cast<uint64_t>(i));
        const ShorSample s = sample_shor(ctx, sub, nullptr, pm);
        ++counts[(s.x_tilde << nf) | s.f];
      }
    } else {
      const int nf = c.n_f > 0 ? c.n_f : c.n_N;
      formula = superposed_formula(c.a, c.n_N, c.n_x, nf);
      ShorSuperposedNSpec spec;
      spec.a = c.a;
      spec.n_N = c.n_N;
      spec.n_x = c.n_x;
      spec.n_f = nf;
      oracle = simulate(spec);
      const uint64_t mask = (uint64_t{1} << c.n_N) - 1;
      counts.assign(formula.size(), 0);
      for (int64_t i = 0; i < count; ++i) {
        RandomSource sub = root.derive(static_cast<uint64_t>(i));
        const SuperposedSample s = sample_superposed_n(c.a, c.n_N, c.n_x, sub, nullptr, nullptr, pm);
        ++counts[((s.N & mask) << (c.n_x + nf)) | (s.x_tilde << nf) | s.f];
      }
    }
    const double exact_gap = tvd(formula, oracle);
    report["tvd_exact"] = exact_gap;
    pass = pass && exact_gap <= kExactTol;
    const ExactDistribution& target = c.against == "paper" ? formula : oracle;
    report["tvd_empirical"] = tvd_counts(counts, target);
    bool gof_pass = true;
    report["gof"] = gof_or_support(counts, target, &gof_pass);
    pass = pass && gof_pass;
  } else if (c.circuit == "grover") {
    const uint64_t x0 = grover_x0(c);
    report["x0"] = x0;
    const ExactDistribution paper = grover_output_distribution(c.n, c.t, x0);
    ExactDistribution target = paper;
    if (c.against == "paper") {
      report["tvd_exact"] = 0.0;  // the two samplers share one closed form
    } else {
      target = simulate(grover_marked(c.n, c.t, x0));
      const double gap = tvd(paper, target);
      report["tvd_exact"] = gap;
      pass = pass && gap <= kExactTol;
    }
    const auto f = [&](uint64_t x) { return x == x0 ? -1 : 1; };
    std::vector<int64_t> counts(paper.size(), 0), counts2(paper.size(), 0);
    for (int64_t i = 0; i < count; ++i) {
      RandomSource sub = root.derive(static_cast<uint64_t>(i));
      const uint64_t x = c.method == "oracle" ? sample_with_oracle(f, c.n, c.t, sub).outcome
                                              : sample_with_x0(x0, c.n, c.t, sub);
      ++counts[x];
    }
    report["tvd_empirical"] = tvd_counts(counts, target);
    bool gof_pass = true;
    report["gof"] = gof_or_support(counts, target, &gof_pass);
    pass = pass && gof_pass;
    if (c.against == "paper") {
      for (int64_t i = 0; i < count; ++i) {
        RandomSource sub = root.derive(static_cast<uint64_t>(count + i));
        ++counts2[sample_with_oracle(f, c.n, c.t, sub).outcome];
      }
      try {
        const GofReport g2 = chi_square_two_sample(counts, counts2);
        report["two_sample"] = gof_to_json(g2);
        pass = pass && g2.p >= kSignificance;
      } catch (const std::domain_error&) {
        report["two_sample"] = json{{"support_only", true}};
      }
    }
  } else if (c.circuit == "coset") {
    const AbelianGroupSpec g = parse_group(c);
    const auto members = enumerate_coset(g);
    report["coset_size"] = members.size();
    std::vector<int64_t> counts(members.size(), 0);
    int64_t outside = 0;
    for (int64_t i = 0; i < count; ++i) {
      RandomSource sub = root.derive(static_cast<uint64_t>(i));
      const auto e = coset_sample(g, sub);
      const auto it = std::lower_bound(members.begin(), members.end(), e);
      if (it == members.end() || *it != e)
        ++outside;
      else
        ++counts[static_cast<size_t>(it - members.begin())];
    }
    report["outside_coset"] = outside;
    pass = pass && outside == 0;
    double emp = 0.0;
    for (int64_t k : counts)
      emp += std::abs(static_cast<double>(k) / static_cast<double>(count) - 1.0 / static_cast<double>(members.size()));
    report["tvd_empirical"] = 0.5 * emp;
    if (members.size() >= 2) {
      const std::vector<double> unif(members.size(), 1.0 / static_cast<double>(members.size()));
      const GofReport gr = chi_square_gof(counts, unif);
      report["gof"] = gof_to_json(gr);
      pass = pass && gr.p >= kSignificance;
    } else {
      report["gof"] = json{{"support_only", true}};
    }
  } else if (c.circuit == "gatelist" || c.circuit == "clifford" || c.circuit == "ht") {
    const GateCircuit circuit = load_circuit(c);
    const std::string route = c.circuit == "gatelist" ? route_gatelist(circuit)
                              : c.circuit == "ht"     ? std::string("ht")
                                                      : std::string("tableau");
    report["sampler"] = route;
    const ExactDistribution target = simulate(circuit);
    std::vector<int64_t> counts(target.size(), 0);
    StabilizerTableau base(1);
    if (route == "tableau") base = evolve_clifford(circuit);
    for (int64_t i = 0; i < count; ++i) {
      RandomSource sub = root.derive(static_cast<uint64_t>(i));
      if (route == "ht") {
        ++counts[ht_sample(circuit, sub)];
      } else if (route == "tableau") {
        StabilizerTableau tab = base;
        ++counts[tab.measure_all(sub)];
      } else {
        ++counts[inverse_transform_sample(target, sub)];
      }
    }
    report["tvd_empirical"] = tvd_counts(counts, target);
    bool gof_pass = true;
    report["gof"] = gof_or_support(counts, target, &gof_pass);
    pass = pass && gof_pass;
  } else {
    throw std::invalid_argument("unknown circuit: " + c.circuit);
  }

  report["pass"] = pass;
  os << report.dump(2) << "\n";
  return pass ? 0 : 1;
}

// ---- bench -------------------------------------------------------------

int cmd_bench(const Cli& c) {
  OutStream o = open_output(c.out);
  std::ostream& os = *o.os;
  const uint64_t seed = c.has_seed ? c.seed : kSuiteSeed;
  const RandomSource root(seed);
  const bool as_json = c.format == "json";
  os << std::setprecision(17);

  json jrho = json::array(), jgrover = json::array();
  if (!as_json)
    os << "# rho rejection sampler\n# columns: q M nu_exact ppa_measured"
       << (c.timing ? " ns_per_draw" : "") << "\n";
  uint64_t stream = 0;
  for (int e = 4; e <= 16; ++e) {
    const uint64_t q = uint64_t{1} << e;
    for (uint64_t M : {uint64_t{1}, uint64_t{2}, q / 2, q - 1}) {
      const RhoParams params = make_rho_params(M, q, 1);
      double nu = 0.0;
      for (uint64_t v = 0; v < q; ++v) nu += eta(params, v);
      RandomSource rng = root.derive(stream++);
      SampleStats st;
      for (int i = 0; i < 20000; ++i) sample_rho(params, rng, &st);
      double ns = 0.0;
      if (c.timing) {
        const auto t0 = std::chrono::steady_clock::now();
        for (int i = 0; i < 100000; ++i) sample_rho(params, rng);
        ns = std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t0).count() / 1e5;
      }
      if (as_json) {
        json row{{"q", q}, {"M", M}, {"nu_exact", nu}, {"ppa_measured", st.proposals_per_accept()}};
        if (c.timing) row["ns_per_draw"] = ns;
        jrho.push_back(row);
      } else {
        os << q << "\t" << M << "\t" << nu << "\t" << st.proposals_per_accept();
        if (c.timing) os << "\t" << ns;
        os << "\n";
      }
    }
  }

  if (!as_json) os << "# grover attempt bounds\n# columns: t draw_bound smallest_n N(n=8) N(n=16) N(n=24)\n";
  for (int64_t t : {int64_t{1}, int64_t{2}, int64_t{3}, int64_t{5}, int64_t{10}, int64_t{20}, int64_t{50},
                    int64_t{100}}) {
    const int64_t bound = draw_bound(t);
    const int smallest = smallest_n_for_draw_bound(t);
    const int64_t n8 = n_draws_required(8, t), n16 = n_draws_required(16, t), n24 = n_draws_required(24, t);
    if (as_json) {
      jgrover.push_back(json{{"t", t},
                             {"draw_bound", bound},
                             {"smallest_n_at_bound", smallest},
                             {"n_draws_n8", n8},
                             {"n_draws_n16", n16},
                             {"n_draws_n24", n24}});
    } else {
      os << t << "\t" << bound << "\t" << smallest << "\t" << n8 << "\t" << n16 << "\t" << n24 << "\n";
    }
  }

  json jthroughput = json::array();
  if (c.timing) {
    const PeriodStructure per = find_period_bruteforce(7, 7919);
    const PreparedShor ctx = prepare_shor(per, 20);
    RandomSource rng = root.derive(stream++);
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 100000; ++i) sample_shor(ctx, rng);
    const double shor_ns =
        std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t0).count() / 1e5;

    GateCircuit cl;
    cl.n_qubits = 64;
    RandomSource gen = root.derive(stream++);
    for (int i = 0; i < 2000; ++i) {
      const int kind = static_cast<int>(gen.below(3));
      const int q1 = static_cast<int>(gen.below(64));
      if (kind == 0)
        cl.gates.push_back(make_h(q1));
      else if (kind == 1)
        cl.gates.push_back(make_s(q1));
      else {
        int q2 = q1;
        while (q2 == q1) q2 = static_cast<int>(gen.below(64));
        cl.gates.push_back(make_cnot(q1, q2));
      }
    }
    const StabilizerTableau base = evolve_clifford(cl);
    t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 10000; ++i) {
      StabilizerTableau tab = base;
      (void)tab.measure_all(rng);
    }
    const double tab_ns =
        std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t0).count() / 1e4;

    if (as_json) {
      jthroughput.push_back(json{{"what", "sample_shor a=7 N=7919 n_x=20"}, {"ns_per_draw", shor_ns}});
      jthroughput.push_back(json{{"what", "tableau measure_all n=64 m=2000"}, {"ns_per_draw", tab_ns}});
    } else {
      os << "# throughput\n";
      os << "sample_shor a=7 N=7919 n_x=20\t" << shor_ns << " ns/draw\n";
      os << "tableau measure_all n=64 m=2000\t" << tab_ns << " ns/draw\n";
    }
  }

  if (as_json) {
    json out{{"seed", seed}, {"rho", jrho}, {"grover", jgrover}};
    if (c.timing) out["throughput"] = jthroughput;
    os << out.dump(2) << "\n";
  }
  return 0;
}

// ---- kalai -------------------------------------------------------------

std::string format_factors(const FactoredInteger& fi) {
  if (fi.factors.empty()) return "1";
  std::string s;
  for (const auto& [p, m] : fi.factors) {
    if (!s.empty()) s += "*";
    s += std::to_string(p);
    if (m > 1) s += "^" + std::to_string(m);
  }
  return s;
}

json factors_json(const FactoredInteger& fi) {
  json arr = json::array();
  for (const auto& [p, m] : fi.factors) arr.push_back(json::array({p, m}));
  return arr;
}

int cmd_kalai(const Cli& c) {
  OutStream o = open_output(c.out);
  std::ostream& os = *o.os;
  const uint64_t seed = resolve_seed(c);
  const int64_t count = c.count < 0 ? 10 : c.count;
  const RandomSource root(seed);
  const bool jsonl = c.format == "json";

  std::unique_ptr<PrimeSieve> sieve;
  if (c.n_max <= (uint64_t{1} << 24)) sieve = std::make_unique<PrimeSieve>(c.n_max);

  std::vector<std::pair<std::string, std::string>> header;
  header.emplace_back("n_max", std::to_string(c.n_max));
  header.emplace_back("deep", c.deep ? "1" : "0");
  header.emplace_back("seed", std::to_string(seed));
  header.emplace_back("count", std::to_string(count));
  header.emplace_back("columns", c.deep ? "value factors predecessors" : "value factors");
  write_stream_header(os, header);

  for (int64_t i = 0; i < count; ++i) {
    RandomSource sub = root.derive(static_cast<uint64_t>(i));
    if (c.deep) {
      const DeepFactoredInteger d = kalai_sample_deep(c.n_max, sub, sieve.get());
      if (jsonl) {
        json preds = json::array();
        for (size_t k = 0; k < d.outer.factors.size(); ++k)
          preds.push_back(json{{"prime", d.outer.factors[k].first},
                               {"value", d.predecessor[k].value},
                               {"factors", factors_json(d.predecessor[k])}});
        os << json{{"value", d.outer.value}, {"factors", factors_json(d.outer)}, {"predecessors", preds}}.dump()
           << "\n";
      } else {
        os << d.outer.value << "\t" << format_factors(d.outer) << "\t";
        for (size_t k = 0; k < d.outer.factors.size(); ++k)
          os << (k ? ";" : "") << d.outer.factors[k].first << "-1=" << format_factors(d.predecessor[k]);
        if (d.outer.factors.empty()) os << "-";
        os << "\n";
      }
    } else {
      const FactoredInteger fi = kalai_sample(c.n_max, sub, sieve.get());
      if (jsonl)
        os << json{{"value", fi.value}, {"factors", factors_json(fi)}}.dump() << "\n";
      else
        os << fi.value << "\t" << format_factors(fi) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Cli c;
  CLI::App app{
      "weaksim: weak simulation of quantum circuits from compact inputs.\n"
      "Randomized commands derive one sub-generator per record as\n"
      "splitmix64(seed xor golden * (record_index + 1)), so parallel and\n"
      "serial runs emit identical streams; omitted seeds are drawn from the\n"
      "system and recorded in the output header. The statevector oracle\n"
      "refuses circuits wider than 24 qubits unless QIS_ORACLE_CAP says\n"
      "otherwise. Exit codes: 0 pass, 1 verification failure, 2 usage error."};
  app.require_subcommand(1);

  const auto add_circuit_flags = [&](CLI::App* cmd) {
    cmd->add_option("--circuit", c.circuit,
                    "circuit family: shor | shor-superposed | grover | gatelist | clifford | ht | coset");
    cmd->add_option("--a", c.a, "base of the modular exponentiation");
    cmd->add_option("--N", c.N, "modulus");
    cmd->add_option("--nx", c.n_x, "Fourier register width");
    cmd->add_option("--nN", c.n_N, "modulus register width (superposed circuit)");
    cmd->add_option("--nf", c.n_f, "f register width (0: smallest that fits)");
    cmd->add_option("--n", c.n, "search register width");
    cmd->add_option("--t", c.t, "search iteration count");
    cmd->add_option("--x0", c.x0, "marked element (default 2^n - 1)")
        ->each([&c](const std::string&) { c.has_x0 = true; });
    cmd->add_option("--file", c.file, "gate-list file, or marked-element file for grover");
    cmd->add_option("--moduli", c.moduli, "comma-separated cycle orders d_i of the abelian group");
    cmd->add_option("--gens", c.gens, "subgroup generators, elements ';'-separated, components ','-separated");
    cmd->add_option("--shift", c.shift, "coset representative, comma-separated (default all zero)");
  };
  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", c.seed, "64-bit seed (omitted: drawn from the system and recorded)")
        ->each([&c](const std::string&) { c.has_seed = true; });
  };
  const auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", c.out, "output file (default stdout)"); };

  CLI::App* ex = app.add_subcommand("exact", "print a circuit's exact output distribution");
  add_circuit_flags(ex);
  ex->get_option("--circuit")->required();
  ex->add_option("--method", c.method,
                 "formula: closed form (shor: first-register marginal); oracle: statevector; "
                 "auto (default): formula where one exists");
  ex->add_flag("--joint", c.joint, "shor formula: emit the (x_tilde, f) joint instead of the marginal");
  ex->add_flag("--marginal", c.marginal, "oracle/superposed: reduce to the x_tilde marginal");
  ex->add_flag("--sparse", c.sparse, "omit entries below 1e-15");
  ex->add_option("--format", c.format, "json (default) | tsv");
  add_out(ex);

  CLI::App* sa = app.add_subcommand("sample", "draw records from a circuit's weak simulation");
  add_circuit_flags(sa);
  sa->get_option("--circuit")->required();
  sa->add_option("--count", c.count, "number of records (default 10)");
  add_seed(sa);
  sa->add_option("--method", c.method, "grover: formula = marked-element sampler, oracle = query sampler");
  sa->add_option("--proposal", c.proposal, "shor family rho proposal: fast (default) | reference");
  sa->add_option("--format", c.format, "tsv (default) | json (one object per line)");
  add_out(sa);

  CLI::App* co = app.add_subcommand("compare", "verify a sampler against an exact law");
  add_circuit_flags(co);
  co->add_option("--count", c.count, "sample size (default 100000)");
  add_seed(co);
  co->add_option("--against", c.against,
                 "oracle (default): statevector law; paper: the closed-form law (grover: adds the "
                 "two-sampler test)");
  co->add_option("--method", c.method, "grover: which sampler draws (formula | oracle)");
  co->add_option("--proposal", c.proposal, "shor family rho proposal: fast | reference");
  co->add_option("--suite", c.suite, "'full' runs the whole acceptance matrix");
  add_out(co);

  CLI::App* be = app.add_subcommand("bench", "report rejection-sampler efficiency and attempt bounds");
  add_seed(be);
  be->add_option("--format", c.format, "tsv (default) | json");
  be->add_flag("--time", c.timing, "add wall-clock per-draw timings (non-deterministic output)");
  add_out(be);

  CLI::App* ka = app.add_subcommand("kalai", "draw uniform factored integers");
  ka->add_option("--nmax", c.n_max, "upper bound of the uniform range (default 2^20)");
  ka->add_option("--count", c.count, "number of records (default 10)");
  add_seed(ka);
  ka->add_flag("--deep", c.deep, "also factor p - 1 for every prime p of the value");
  ka->add_option("--format", c.format, "tsv (default) | json (one object per line)");
  add_out(ka);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ex->parsed()) return cmd_exact(c);
    if (sa->parsed()) return cmd_sample(c);
    if (co->parsed()) return cmd_compare(c);
    if (be->parsed()) return cmd_bench(c);
    if (ka->parsed()) return cmd_kalai(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
