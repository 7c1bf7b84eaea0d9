#pragma once

#include "geoprover/solver.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace geo {

struct CertificateEntry {
  enum class Source { Step, LawOfSines };
  Source source = Source::Step;
  std::size_t step = 0;               // Step: index of the proof step whose encoding contains `equation`
  std::array<PointId, 3> triangle{};  // LawOfSines
  Equation equation;
  Rational coefficient;
};

struct ProofCertificate {
  Equation target;
  std::vector<CertificateEntry> entries;
};

struct ProofStep {
  std::size_t index = 0;
  Statement statement;
  Justification::Kind kind = Justification::Kind::Given;
  std::size_t construction_step = 0;
  std::string rule_id;
  std::vector<PointId> binding;
  std::vector<ProofCertificate> certificates;
  std::vector<std::size_t> deps;  // sorted step indices
};

struct Proof {
  Statement goal;
  std::vector<ProofStep> steps;
};

class GoalNotProven : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Backward slice from the goal, ordered by establishment epoch.
Proof extract_proof(const SaturationResult& r);

// JSON layout:
//   {"goal": "<statement>", "steps": [{"index": i, "statement": "<statement>",
//     "justification": {"kind": "given", "construction_step": k}
//                    | {"kind": "rule", "rule": "<id>", "binding": ["<point>", ...]}
//                    | {"kind": "ar", "certificates": [{"table": "<t>", "target": "<eq>",
//                         "entries": [{"step": j | "law_of_sines": [p, q, r],
//                                      "equation": "<eq>", "num": "<int>", "den": "<int>"}]}]},
//     "deps": [j, ...]}]}
nlohmann::json proof_to_json(const Proof& pr, const Problem& p);
// Throws std::invalid_argument on malformed input.
Proof proof_from_json(const nlohmann::json& j, const Problem& p);
std::string proof_to_text(const Proof& pr, const Problem& p);

} // namespace geo
