#pragma once

#include "geoprover/equation.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace geo {

using EquationId = std::uint32_t;

// Sparse rational combination of inserted equations, sorted by id.
class Combination {
public:
  using Entry = std::pair<EquationId, Rational>;

  Combination() = default;
  static Combination unit(EquationId id) {
    Combination c;
    c.entries_.emplace_back(id, Rational(1));
    return c;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  void add_scaled(const Combination& other, const Rational& factor);
  void scale(const Rational& factor);
  void add(EquationId id, const Rational& coef);

  bool operator==(const Combination&) const = default;

private:
  std::vector<Entry> entries_;
};

// target == sum(coef_i * equation_i), exactly.
struct Certificate {
  Equation target;
  Combination combination;
};

// Re-sums the cited equations and compares with the target term by term.
bool replay_certificate(const Certificate& cert, const std::function<const Equation*(EquationId)>& lookup);

struct ARCounters {
  std::uint64_t inserts = 0;
  std::uint64_t row_applications = 0;  // row subtractions performed while reducing
  std::uint64_t queries = 0;
  std::uint64_t resumed = 0;           // queries that continued from a stored residual
};

// A target equation reduced modulo the first `watermark` rows. Owned by the
// table; addresses stay valid for the table's lifetime.
struct PendingQuery {
  Equation target;
  Equation residual;
  Combination subtracted;  // residual == target - sum(subtracted)
  std::size_t watermark = 0;
  bool proven = false;
};

class ARTable {
public:
  enum class Outcome { NewRow, Redundant, Inconsistent };
  struct InsertReport {
    Outcome outcome;
    // For Inconsistent: the combination of inserted equations summing to a
    // nonzero constant.
    std::optional<Certificate> contradiction;
  };

  struct Row {
    Equation eq;  // normalized; eq.terms().front().var is the pivot
    Combination provenance;  // eq == sum(provenance)
  };

  explicit ARTable(Table t, bool resume = true) : table_(t), resume_(resume) {}

  Table table() const { return table_; }

  InsertReport insert(const Equation& e, EquationId origin);

  // Get-or-create the pending query for a target (keyed by its normalized form).
  PendingQuery& pending(const Equation& target);
  // Continues reducing from the watermark (or from scratch with resumption
  // disabled). Returns a certificate once the residual vanishes.
  std::optional<Certificate> advance(PendingQuery& q);
  std::optional<Certificate> query(const Equation& target) { return advance(pending(target)); }

  const std::vector<Row>& rows() const { return rows_; }
  // Rows sorted by pivot: the table's reduced row echelon form.
  std::vector<Equation> echelon() const;
  const ARCounters& counters() const { return counters_; }
  bool resumes() const { return resume_; }

private:
  // Reduces `r` against rows with index >= first_row; `sub` accumulates the
  // subtracted combination.
  void reduce(Equation& r, Combination& sub, std::size_t first_row);

  Table table_;
  bool resume_;
  std::vector<Row> rows_;
  std::map<VarId, std::size_t> pivot_row_;
  std::unordered_map<Equation, PendingQuery, EquationHash> pending_;
  ARCounters counters_;
};

} // namespace geo
