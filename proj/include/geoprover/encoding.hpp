#pragma once

#include "geoprover/statement.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace geo {

struct EncodingOptions {
  bool law_of_sines = false;
};

class ExtensionDisabled : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// One way of expressing a statement in one table. A statement holds as soon
// as every equation of any provable alternative holds; insert-only
// alternatives are consequences that are fed to the tables but are not
// strong enough to imply the statement.
struct Encoding {
  Table table = Table::Len;
  std::vector<Equation> equations;  // normalized, nonempty
  bool provable = true;
};

std::vector<Encoding> encode(const Statement& s, const EncodingOptions& opts);

// Every equation of every alternative, deduplicated, in a fixed order.
std::vector<Equation> statement_to_equations(const Statement& s, const EncodingOptions& opts);

// log|bc| - log sin A = log|ca| - log sin B = log|ab| - log sin C, as two
// LogLen equations.
std::vector<Equation> law_of_sines_equations(std::array<PointId, 3> triangle, const EncodingOptions& opts);

bool uses_sines(const Equation& e);

} // namespace geo
