#pragma once

#include "geoprover/statement.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace geo {

// A catalog rule. Patterns are ordinary Statements whose "point ids" are
// pattern-variable indices into `variables`.
struct Rule {
  enum class Source : std::uint8_t { Builtin, Mined };

  std::string id;
  std::vector<std::string> variables;  // without the '$'
  std::vector<Statement> hypotheses;
  Statement conclusion;
  Source source = Source::Builtin;

  std::size_t variable_count() const { return variables.size(); }
};

class CatalogError : public std::runtime_error {
public:
  CatalogError(int line, const std::string& detail)
      : std::runtime_error("catalog line " + std::to_string(line) + ": " + detail) {}
};

// Record format, one per line:
//   rule  <id>: <pattern>, <pattern>, ... => <pattern>
//   mined <id>: ...
// Patterns use the problem-language predicate syntax with $-prefixed variables.
std::vector<Rule> parse_catalog(std::string_view text);
std::vector<Rule> load_catalog_file(const std::string& path);
const std::vector<Rule>& builtin_catalog();
std::string_view builtin_catalog_text();

std::string format_rule(const Rule& r);

// Substitutes binding[var] for every pattern variable; returns the canonical
// statement.
Statement instantiate(const Statement& pattern, std::span<const PointId> binding);

// Rejects substitutions that collapse a pattern: zero-length segments,
// repeated points in coll/cyclic/midpoint, a segment compared with itself, or
// a zero angle. Checked on the pattern as written, before canonicalization.
bool nondegenerate_instance(const Statement& pattern, std::span<const PointId> binding);

const Rule* find_rule(const std::vector<Rule>& catalog, std::string_view id);

} // namespace geo
