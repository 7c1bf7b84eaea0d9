#pragma once

#include "geoprover/statement.hpp"

#include "json.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace geo {

// A line or circle used by the on_* and intersect constructors.
struct GeomObject {
  enum class Kind : std::uint8_t {
    Line,   // through pts[0], pts[1]
    PLine,  // through pts[0], parallel to pts[1] pts[2]
    TLine,  // through pts[0], perpendicular to pts[1] pts[2]
    Circle  // centre pts[0], through pts[1]
  };
  Kind kind = Kind::Line;
  std::array<PointId, 3> pts{};

  std::size_t point_count() const { return kind == Kind::PLine || kind == Kind::TLine ? 3 : 2; }
  bool is_circle() const { return kind == Kind::Circle; }
  bool operator==(const GeomObject&) const = default;
};

enum class ConstructionKind : std::uint8_t {
  FreePoint,     // free, or `point x y` with pinned coordinates
  OnLine,        // on_line a b / on_pline p a b / on_tline p a b
  OnCircle,      // on_circle o a
  Midpoint,      // midpoint a b
  Foot,          // foot p a b
  Circumcenter,  // circumcenter a b c
  Reflect,       // reflect p a b (across line ab)
  ParallelThrough,
  PerpendicularThrough,
  Intersect      // intersect <obj> <obj>
};

struct Construction {
  ConstructionKind kind = ConstructionKind::FreePoint;
  PointId out = 0;
  std::vector<PointId> in;
  std::vector<GeomObject> objects;
  std::optional<std::array<double, 2>> pinned;
  // Defining facts, canonical and deduplicated.
  std::vector<Statement> implied;

  bool operator==(const Construction&) const = default;
};

struct Problem {
  std::vector<std::string> names;  // names[id]
  std::vector<Construction> constructions;  // constructions[id].out == id
  Statement goal;

  std::size_t point_count() const { return names.size(); }
  std::string name(PointId p) const { return p < names.size() ? names[p] : "#" + std::to_string(p); }
  PointNamer namer() const {
    return [this](PointId p) { return name(p); };
  }
  std::optional<PointId> find(std::string_view name) const;

  // All construction-implied statements paired with their step index.
  std::vector<std::pair<Statement, std::size_t>> implied_facts() const;

  bool operator==(const Problem&) const = default;
};

class ParseError : public std::runtime_error {
public:
  enum class Code { UnknownConstructor, ArityMismatch, UndeclaredPoint, MissingGoal, Syntax };

  ParseError(Code code, int line, const std::string& detail);

  Code code() const { return code_; }
  int line() const { return line_; }

private:
  Code code_;
  int line_;
};

std::string_view code_name(ParseError::Code c);

// Line-based constructive language:
//   <name> = <constructor> <args...>      one per line (or ';'-separated)
//   ? <predicate> <args...>               the goal, exactly once, last
//   # comment
Problem parse_problem(std::string_view text);
std::string serialize_problem(const Problem& p);

// Facts a construction introduces about its output point.
std::vector<Statement> implied_statements(const Construction& c);

nlohmann::json problem_to_json(const Problem& p);
Problem problem_from_json(const nlohmann::json& j);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

} // namespace geo
