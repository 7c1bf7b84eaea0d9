#pragma once

#include "geoprover/diagram.hpp"
#include "geoprover/rules.hpp"

#include <array>
#include <span>
#include <vector>

namespace geo {

// Triangles first[i] <-> second[i]; `reflected` when orientations differ.
struct SimilarPair {
  std::array<PointId, 3> first{}, second{};
  bool reflected = false;
  auto operator<=>(const SimilarPair&) const = default;
};

// Line vertex-foot bisects the angle side1-vertex-side2 (internally or
// externally), with foot on line side1-side2.
struct AngleBisector {
  PointId vertex = 0, side1 = 0, side2 = 0, foot = 0;
  auto operator<=>(const AngleBisector&) const = default;
};

// Numerically detected configurations, each family a sorted set of
// canonical members.
struct ConfigSet {
  std::vector<Statement> coll;      // distinct triples
  std::vector<Statement> cyclic;    // distinct quadruples
  std::vector<Statement> para;      // pairs of distinct segments
  std::vector<Statement> perp;      // pairs of distinct segments
  std::vector<Statement> cong;      // pairs of distinct segments
  std::vector<Statement> midpoint;  // m, a, b distinct
  std::vector<Statement> eqangle;   // equal angles at vertices: eqangle v p v q w r w s
  std::vector<SimilarPair> similar;
  std::vector<AngleBisector> bisectors;

  // The family that drives matching of hypotheses of kind k, or nullptr.
  const std::vector<Statement>* family(Kind k) const;
};

ConfigSet detect_configurations(const Coordinates& c, double tol);

// Canonical representatives, shared with the test oracles.
SimilarPair canonical_similar(const SimilarPair& s);
AngleBisector canonical_bisector(const AngleBisector& b);
// Shape test for triangles abc ~ def in this correspondence.
bool similar_triangles(const Coordinates& c, const std::array<PointId, 3>& t1, const std::array<PointId, 3>& t2,
                       double tol);
bool nondegenerate_triangle(const Coordinates& c, PointId a, PointId b, PointId cc, double tol);

struct RuleInstance {
  std::size_t rule_index = 0;  // into the catalog used for matching
  std::string rule_id;
  std::vector<PointId> binding;  // pattern variable -> point
  std::vector<Statement> hypotheses;  // canonical, sorted, deduplicated
  Statement conclusion;

  // Ordering/dedup key: (rule id, hypotheses, conclusion).
  bool same_key(const RuleInstance& o) const {
    return rule_id == o.rule_id && hypotheses == o.hypotheses && conclusion == o.conclusion;
  }
};

bool key_less(const RuleInstance& a, const RuleInstance& b);

// Builds an instance from a complete binding, or nullopt when the conclusion
// is one of the hypotheses (such an instance carries no information).
std::optional<RuleInstance> make_instance(const std::vector<Rule>& catalog, std::size_t rule_index,
                                          std::vector<PointId> binding);

// Every nondegenerate instance (see nondegenerate_instance) whose hypotheses
// and conclusion all hold numerically; sorted by key, one instance per key.
std::vector<RuleInstance> match_rules(const ConfigSet& cfg, const std::vector<Rule>& catalog,
                                      const Coordinates& c, double tol);

// Sorts by key and keeps the lexicographically smallest binding per key.
void sort_and_dedup(std::vector<RuleInstance>& instances);

} // namespace geo
