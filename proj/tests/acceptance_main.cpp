// Acceptance gate: runs the full verification matrix and prints one
// pass/fail line per criterion. Optional arguments select individual
// criteria by index (1-8); an optional --seed overrides the fixed default.

#include <cstdint>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "weaksim/verify.hpp"

int main(int argc, char** argv) {
  uint64_t seed = 0x51AB1E5EEDull;
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      seed = std::stoull(argv[++i]);
    } else {
      const int k = std::stoi(argv[i]);
      if (k < 1 || k > 8) {
        std::cerr << "usage: acceptance [--seed S] [criterion...]\n";
        return 2;
      }
      selected.push_back(k);
    }
  }

  using namespace weaksim;
  if (selected.empty()) {
    const VerifySummary s = run_acceptance(seed, &std::cout);
    return s.all_pass() ? 0 : 1;
  }

  verify_detail::StatChecker chk{seed};
  bool all = true;
  for (int k : selected) {
    CriterionResult r;
    switch (k) {
      case 1: r = run_criterion1(chk); break;
      case 2: r = run_criterion2(chk); break;
      case 3: r = run_criterion3(chk); break;
      case 4: r = run_criterion4(chk); break;
      case 5: r = run_criterion5(chk); break;
      case 6: r = run_criterion6(chk); break;
      case 7: r = run_criterion7(chk); break;
      default: r = run_criterion8(chk); break;
    }
    std::cout << "criterion " << r.index << " [" << (r.pass ? "PASS" : "FAIL") << "] " << r.name
              << ": " << r.detail << "\n";
    all = all && r.pass;
  }
  std::cout << "statistical checks: " << chk.total << ", retried once: " << chk.retried << "\n";
  return all ? 0 : 1;
}
