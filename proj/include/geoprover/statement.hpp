#pragma once

#include "geoprover/equation.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace geo {

enum class Kind : std::uint8_t { Coll, Cyclic, Para, Perp, Cong, EqAngle, EqRatio, Midpoint, AREq };

inline constexpr std::array<Kind, 9> kAllKinds = {Kind::Coll,    Kind::Cyclic,  Kind::Para,
                                                  Kind::Perp,    Kind::Cong,    Kind::EqAngle,
                                                  Kind::EqRatio, Kind::Midpoint, Kind::AREq};

std::size_t arity(Kind k);
std::string_view kind_name(Kind k);
std::optional<Kind> parse_kind(std::string_view name);

// A geometric relation over point ids. Argument conventions:
//   Coll(a,b,c)            a, b, c collinear
//   Cyclic(a,b,c,d)        concyclic
//   Para(a,b,c,d)          line ab parallel to line cd
//   Perp(a,b,c,d)          line ab perpendicular to line cd
//   Cong(a,b,c,d)          |ab| = |cd|
//   EqAngle(a,b,c,d,e,f,g,h)  directed angle (ab,cd) = (ef,gh) mod pi
//   EqRatio(a,b,c,d,e,f,g,h)  |ab|/|cd| = |ef|/|gh|
//   Midpoint(m,a,b)        m is the midpoint of ab
//   AREq                   the payload equation holds
// Only canonical statements go into dictionaries; see canonical().
class Statement {
public:
  Statement() = default;
  Statement(Kind kind, std::span<const PointId> args);
  explicit Statement(Equation eq);

  Kind kind() const { return kind_; }
  std::span<const PointId> args() const { return {args_.data(), arity(kind_)}; }
  PointId arg(std::size_t i) const { return args_[i]; }
  const std::optional<Equation>& equation() const { return equation_; }

  bool operator==(const Statement& o) const {
    return kind_ == o.kind_ && args_ == o.args_ && equation_ == o.equation_;
  }
  std::strong_ordering operator<=>(const Statement& o) const;

  std::size_t hash() const;

private:
  Kind kind_ = Kind::Coll;
  std::array<PointId, 8> args_{};
  std::optional<Equation> equation_;
};

struct StatementHash {
  std::size_t operator()(const Statement& s) const { return s.hash(); }
};

// The unique representative of s under its kind's symmetry group:
// lexicographically smallest argument list among all symmetric images.
// AREq statements get a normalized payload.
Statement canonical(const Statement& s);

// All argument-position permutations under which a kind is invariant.
// images[i][j] is the source position for target position j.
const std::vector<std::array<std::uint8_t, 8>>& symmetry_group(Kind k);

// Every point id mentioned by s, including those inside an AREq payload.
std::vector<PointId> points_of(const Statement& s);

// Text form shared by problem goals, rule patterns and proof files:
//   "para a b c d", "eq sqlen 1 a b -1 c d = 0", "eq loglen 1 a b -1 sin a b c = 0"
using PointNamer = std::function<std::string(PointId)>;
using PointResolver = std::function<PointId(std::string_view)>;

std::string format_statement(const Statement& s, const PointNamer& name);
std::string format_equation(const Equation& e, const PointNamer& name);

// Parses a whitespace-separated predicate. Errors are std::invalid_argument
// (unknown predicate, wrong arity, malformed equation); name resolution
// errors come from `resolve`.
Statement parse_statement(std::span<const std::string> tokens, const PointResolver& resolve);

std::vector<std::string> split_ws(std::string_view line);

} // namespace geo
