#pragma once

#include "geoprover/proof.hpp"
#include "geoprover/rules.hpp"

#include <string>

namespace geo {

struct CheckOptions {
  std::uint64_t seed = 0x5eed;  // seed of the independent diagram
  Tolerances tol;
};

// Independent replay of a proof: step order, given facts against the
// constructions, rule steps by re-instantiation, AR steps by exact
// re-summation, and every statement on a freshly sampled diagram. Never
// throws; on failure `diagnostic` names the first problem found.
bool verify_proof(const Proof& pr, const Problem& p, const std::vector<Rule>& catalog, const CheckOptions& opts,
                  std::string* diagnostic = nullptr);

} // namespace geo
