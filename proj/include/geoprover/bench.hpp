#pragma once

#include "geoprover/solver.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace geo {

struct BenchRow {
  std::string name;  // file name inside the corpus directory
  std::optional<Outcome> outcome;  // nullopt when the problem could not be run
  std::string error;
  SolverStats stats;
  std::size_t instances = 0;
  std::size_t proof_steps = 0;
  double build_seconds = 0, match_seconds = 0, saturate_seconds = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;  // sorted by name

  std::size_t solved() const;
  std::size_t count(Outcome o) const;
  std::size_t errors() const;
  double total_seconds() const;
};

BenchRow run_one(const std::filesystem::path& file, const std::vector<Rule>& catalog, const SolverConfig& cfg);

// Every *.geo file in `dir`, on `jobs` worker threads (0 = hardware threads).
BenchReport run_bench(const std::filesystem::path& dir, const std::vector<Rule>& catalog, const SolverConfig& cfg,
                      unsigned jobs = 0);

// Counters and outcomes are reproducible; wall times live under "metadata".
nlohmann::json bench_to_json(const BenchReport& r);
std::string bench_table(const BenchReport& r);

// Manifest: {"<file>": "<Outcome>", ...}. Returns one line per disagreement.
std::vector<std::string> manifest_mismatches(const BenchReport& r, const nlohmann::json& manifest);

} // namespace geo
