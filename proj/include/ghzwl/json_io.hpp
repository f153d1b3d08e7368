#pragma once

// JSON documents for states, witnesses, criterion reports and decompositions.

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ghzwl/constructions.hpp"
#include "ghzwl/core.hpp"
#include "ghzwl/criteria.hpp"
#include "ghzwl/witness.hpp"

namespace ghzwl {

using nlohmann::json;

// State document: {"probs":[16]} and/or {"correlations":[15]}.
inline CorrelationVector correlations_from_json(const json& j) {
  if (j.contains("correlations")) {
    const auto& arr = j.at("correlations");
    if (arr.size() != kNumPauli) throw std::invalid_argument("correlations must have 15 entries");
    CorrelationVector R;
    for (int i = 0; i < kNumPauli; ++i) R[i + 1] = arr.at(static_cast<size_t>(i)).get<double>();
    return R;
  }
  if (j.contains("probs")) {
    const auto& arr = j.at("probs");
    if (arr.size() != kNumBasis) throw std::invalid_argument("probs must have 16 entries");
    std::array<double, kNumBasis> p{};
    for (int i = 0; i < kNumBasis; ++i) p[static_cast<size_t>(i)] = arr.at(static_cast<size_t>(i)).get<double>();
    return correlations(GhzDiagonalState(p));
  }
  throw std::invalid_argument("state document needs \"probs\" or \"correlations\"");
}

inline GhzDiagonalState state_from_json(const json& j) {
  if (j.contains("probs")) {
    const auto& arr = j.at("probs");
    if (arr.size() != kNumBasis) throw std::invalid_argument("probs must have 16 entries");
    std::array<double, kNumBasis> p{};
    for (int i = 0; i < kNumBasis; ++i) p[static_cast<size_t>(i)] = arr.at(static_cast<size_t>(i)).get<double>();
    return GhzDiagonalState(p);
  }
  return state_from_correlations(correlations_from_json(j));
}

// Writer emits both blocks.
inline json state_to_json(const GhzDiagonalState& s) {
  json j;
  j["probs"] = s.probs();
  const CorrelationVector R = correlations(s);
  std::vector<double> r(R.R.begin() + 1, R.R.end());
  j["correlations"] = r;
  return j;
}

inline WitnessParams witness_from_json(const json& j) {
  const auto& arr = j.at("M");
  if (arr.size() != kNumPauli) throw std::invalid_argument("witness document needs M with 15 entries");
  WitnessParams M;
  for (int i = 0; i < kNumPauli; ++i) M[i + 1] = arr.at(static_cast<size_t>(i)).get<double>();
  return M;
}

inline json witness_to_json(const WitnessParams& M) {
  std::vector<double> m(M.M.begin() + 1, M.M.end());
  return json{{"M", m}};
}

inline json report_to_json(const CriterionReport& rep) {
  auto entry = [](const CriterionReport::Entry& e) {
    return json{{"applicable", e.applicable}, {"margin", e.margin}};
  };
  return json{{"I", entry(rep.I)},       {"Iprime", entry(rep.Iprime)}, {"II", entry(rep.II)},
              {"III", entry(rep.III)},   {"IV", entry(rep.IV)},
              {"verdict", rep.verdict()}};
}

inline json witness_report_to_json(const WitnessReport& rep) {
  return json{{"expectation", rep.expectation},
              {"lambda", rep.lambda},
              {"L", rep.L},
              {"entangled", rep.entangled}};
}

inline json decomposition_to_json(const Decomposition& dec) {
  json terms = json::array();
  for (const auto& t : dec.terms) {
    json jt;
    jt["weight"] = t.weight;
    jt["partition"] = t.partition.name();
    jt["single1"] = {{"theta", t.single1.theta}, {"phi", t.single1.phi}};
    jt["single2"] = {{"theta", t.single2.theta}, {"phi", t.single2.phi}};
    std::vector<double> re(4), im(4);
    for (int i = 0; i < 4; ++i) {
      re[static_cast<size_t>(i)] = t.pair_state(i).real();
      im[static_cast<size_t>(i)] = t.pair_state(i).imag();
    }
    jt["pair_re"] = re;
    jt["pair_im"] = im;
    terms.push_back(jt);
  }
  return json{{"segment", dec.segment}, {"terms", terms}};
}

inline json verify_report_to_json(const VerifyReport& rep) {
  return json{{"weights_ok", rep.weights_ok},
              {"products_ok", rep.products_ok},
              {"weight_sum", rep.weight_sum},
              {"max_residual", rep.max_residual}};
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace ghzwl
