#pragma once

#include "geoprover/ar_table.hpp"
#include "geoprover/encoding.hpp"
#include "geoprover/matcher.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace geo {

struct SolverConfig {
  std::uint64_t seed = 0;
  double timeout_seconds = 10;
  bool law_of_sines = false;
  bool resume_queries = true;
  Tolerances tol;
  // Where the reproduction bundle goes when the tables become inconsistent;
  // empty means the system temporary directory.
  std::string repro_dir;
};

enum class Outcome { GoalProven, Saturated, Timeout, Inconsistent };
std::string_view outcome_name(Outcome o);

// Where an equation inside a table came from.
struct EquationOrigin {
  enum class Kind { Statement, LawOfSines };
  Kind kind = Kind::Statement;
  std::size_t record = 0;              // Statement: epoch of the establishing record
  std::array<PointId, 3> triangle{};   // LawOfSines
};

struct InsertedEquation {
  Equation equation;
  EquationOrigin origin;
};

struct Justification {
  enum class Kind { Given, Rule, AR };
  Kind kind = Kind::Given;
  std::size_t construction_step = 0;  // Given
  std::string rule_id;                // Rule
  std::vector<PointId> binding;       // Rule
  std::vector<Statement> hypotheses;  // Rule
  std::vector<Certificate> certificates;  // AR, one per equation of the used encoding
};

struct StatementRecord {
  enum class Status { Unknown, Established };
  Statement statement;
  Status status = Status::Established;
  Justification justification;
  std::size_t epoch = 0;
};

struct SolverStats {
  std::uint64_t instances = 0;
  std::uint64_t rule_firings = 0;
  std::uint64_t ar_inserts = 0;
  std::uint64_t ar_row_applications = 0;
  std::uint64_t ar_queries = 0;
  std::uint64_t queries_resumed = 0;
  std::uint64_t ar_rounds = 0;
  double wall_seconds = 0;
};

struct SaturationResult {
  Outcome outcome = Outcome::Saturated;
  Statement goal;
  std::vector<StatementRecord> records;  // records[epoch]
  std::unordered_map<Statement, std::size_t, StatementHash> index;
  std::vector<InsertedEquation> equations;  // by inserted-equation id
  SolverStats stats;
  std::string diagnostic;
  std::optional<std::string> repro_path;

  const StatementRecord* find(const Statement& s) const;
  bool established(const Statement& s) const { return find(s) != nullptr; }
};

using Deadline = std::chrono::steady_clock::time_point;

SaturationResult saturate(const Problem& p, const Coordinates& diagram, const std::vector<RuleInstance>& instances,
                          const SolverConfig& cfg, std::optional<Deadline> deadline = std::nullopt);

// Diagram, matching and saturation with per-phase wall times.
struct SolveRun {
  Coordinates diagram;
  std::size_t instance_count = 0;
  SaturationResult result;
  double build_seconds = 0;
  double match_seconds = 0;
  double saturate_seconds = 0;
};

SolveRun solve_problem(const Problem& p, const std::vector<Rule>& catalog, const SolverConfig& cfg);

} // namespace geo
