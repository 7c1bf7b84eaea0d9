#pragma once

#include "geoprover/rational.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace geo {

using PointId = std::uint16_t;

enum class Table : std::uint8_t { Len, LogLen, SqLen };

std::string_view table_name(Table t);
// Accepts "len", "loglen", "sqlen"; throws std::invalid_argument otherwise.
Table parse_table(std::string_view name);

// A table variable. Segments are the common case; sine keys (angle at
// vertex `b` between rays to `a` and `c`) and log-constants only ever live
// in the LogLen table.
struct VarId {
  enum class Kind : std::uint8_t { Segment, Sine, LogConst };

  Table table = Table::Len;
  Kind kind = Kind::Segment;
  std::uint32_t a = 0, b = 0, c = 0;

  static VarId segment(Table t, PointId p, PointId q);
  static VarId sine(PointId p, PointId vertex, PointId q);
  // log(prime); `prime` must be prime for the encoding to be sound.
  static VarId log_const(std::uint32_t prime);

  // Zero-length segments are not variables (their value is 0).
  bool degenerate() const { return kind == Kind::Segment && a == b; }

  auto operator<=>(const VarId&) const = default;
  bool operator==(const VarId&) const = default;
};

struct Term {
  VarId var;
  Rational coef;

  bool operator==(const Term& o) const { return var == o.var && coef == o.coef; }
};

// sum(coef * var) + constant == 0, all variables from one table. Terms are
// kept sorted by VarId with no zero coefficients.
class Equation {
public:
  Equation() = default;
  explicit Equation(Table table) : table_(table) {}

  Table table() const { return table_; }
  const std::vector<Term>& terms() const { return terms_; }
  const Rational& constant() const { return constant_; }

  bool empty() const { return terms_.empty(); }
  bool is_zero() const { return terms_.empty() && constant_ == 0; }

  // Adds `coef * var`. Degenerate segments are dropped; a var from another
  // table throws std::invalid_argument.
  Equation& add(const VarId& var, const Rational& coef);
  Equation& add_constant(const Rational& c);
  // *this += factor * other
  Equation& add_scaled(const Equation& other, const Rational& factor);

  Rational coefficient(const VarId& var) const;
  const Term* find(const VarId& var) const;

  // Scales to integer coefficients with content gcd 1 and a positive first
  // coefficient. Returns the factor that was applied.
  Rational normalize();
  Equation normalized() const {
    Equation e = *this;
    e.normalize();
    return e;
  }

  bool operator==(const Equation& o) const {
    return table_ == o.table_ && terms_ == o.terms_ && constant_ == o.constant_;
  }
  std::strong_ordering operator<=>(const Equation& o) const;

  std::size_t hash() const;

private:
  Table table_ = Table::Len;
  std::vector<Term> terms_;
  Rational constant_ = 0;
};

struct EquationHash {
  std::size_t operator()(const Equation& e) const { return e.hash(); }
};

std::size_t hash_rational(const Rational& q);

// Factorizes a positive rational into prime powers: returns (prime, exponent)
// pairs sorted by prime. Throws std::domain_error for q <= 0 or for primes that
// do not fit in 32 bits.
std::vector<std::pair<std::uint32_t, long>> factorize(const Rational& q);

} // namespace geo
