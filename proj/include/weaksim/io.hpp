#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "weaksim/distribution.hpp"
#include "weaksim/stats.hpp"

namespace weaksim {

// {"n_bits": n, "probs": [[x, p], ...]} sorted by x; sparse output omits
// entries below 1e-15.
inline nlohmann::json distribution_to_json(const ExactDistribution& d, bool sparse = false) {
  nlohmann::json probs = nlohmann::json::array();
  for (size_t x = 0; x < d.size(); ++x) {
    if (sparse && d.probs[x] < 1e-15) continue;
    probs.push_back({x, d.probs[x]});
  }
  return {{"n_bits", d.n_bits}, {"probs", std::move(probs)}};
}

inline ExactDistribution distribution_from_json(const nlohmann::json& j) {
  ExactDistribution d = ExactDistribution::zeros(j.at("n_bits").get<int>());
  for (const auto& entry : j.at("probs")) {
    const uint64_t x = entry.at(0).get<uint64_t>();
    if (x >= d.size()) throw std::invalid_argument("distribution_from_json: outcome out of range");
    d.probs[x] = entry.at(1).get<double>();
  }
  return d;
}

inline nlohmann::json gof_to_json(const GofReport& g) {
  return {{"stat", g.stat}, {"dof", g.dof}, {"p", g.p}, {"n", g.n}};
}

// Header of a sample stream: '# key: value' lines recording the compact
// input actually used, the seed, and the record layout, then one record per
// line with tab-separated fields.
inline void write_stream_header(std::ostream& os,
                                const std::vector<std::pair<std::string, std::string>>& fields) {
  for (const auto& [key, value] : fields) os << "# " << key << ": " << value << "\n";
}

// Search-predicate file: either a single 'x0=<int>' line or a bit-vector
// (whitespace-separated 0/1 entries, a 1 marking the element with f = -1).
// Returns the marked element; 'size' receives the table length when the
// bit-vector form is used (0 for the x0 form).
inline uint64_t parse_marked_element(std::istream& is, size_t* size = nullptr) {
  if (size) *size = 0;
  std::string tok;
  std::vector<int> bits;
  bool have_x0 = false;
  uint64_t x0 = 0;
  while (is >> tok) {
    if (tok.rfind("x0=", 0) == 0) {
      if (have_x0 || !bits.empty()) throw std::invalid_argument("predicate file: mixed formats");
      x0 = std::stoull(tok.substr(3));
      have_x0 = true;
    } else if (tok == "0" || tok == "1") {
      if (have_x0) throw std::invalid_argument("predicate file: mixed formats");
      bits.push_back(tok == "1");
    } else {
      throw std::invalid_argument("predicate file: unexpected token '" + tok + "'");
    }
  }
  if (have_x0) return x0;
  if (bits.empty()) throw std::invalid_argument("predicate file: empty");
  size_t marked = bits.size();
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) {
      if (marked != bits.size()) throw std::invalid_argument("predicate file: more than one marked element");
      marked = i;
    }
  }
  if (marked == bits.size()) throw std::invalid_argument("predicate file: no marked element");
  if (size) *size = bits.size();
  return marked;
}

}  // namespace weaksim
