#include "geoprover/bench.hpp"

#include "geoprover/proof.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace geo {

std::size_t BenchReport::count(Outcome o) const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [o](const BenchRow& r) { return r.outcome == o; }));
}

std::size_t BenchReport::solved() const { return count(Outcome::GoalProven); }

std::size_t BenchReport::errors() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const BenchRow& r) { return !r.outcome; }));
}

double BenchReport::total_seconds() const {
  double t = 0;
  for (const BenchRow& r : rows) t += r.build_seconds + r.match_seconds + r.saturate_seconds;
  return t;
}

BenchRow run_one(const std::filesystem::path& file, const std::vector<Rule>& catalog, const SolverConfig& cfg) {
  BenchRow row;
  row.name = file.filename().string();
  try {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot read " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    Problem p = parse_problem(ss.str());
    SolveRun run = solve_problem(p, catalog, cfg);
    row.outcome = run.result.outcome;
    row.stats = run.result.stats;
    row.instances = run.instance_count;
    row.build_seconds = run.build_seconds;
    row.match_seconds = run.match_seconds;
    row.saturate_seconds = run.saturate_seconds;
    if (run.result.outcome == Outcome::GoalProven) row.proof_steps = extract_proof(run.result).steps.size();
    if (run.result.outcome == Outcome::Inconsistent) row.error = run.result.diagnostic;
  } catch (const std::exception& e) {
    row.outcome.reset();
    row.error = e.what();
  }
  return row;
}

BenchReport run_bench(const std::filesystem::path& dir, const std::vector<Rule>& catalog, const SolverConfig& cfg,
                      unsigned jobs) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".geo") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  BenchReport report;
  report.rows.resize(files.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) report.rows[i] = run_one(files[i], catalog, cfg);
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return report;
}

nlohmann::json bench_to_json(const BenchReport& r) {
  nlohmann::json problems = nlohmann::json::array();
  nlohmann::json timing = nlohmann::json::array();
  double build = 0, match = 0, sat = 0;
  for (const BenchRow& row : r.rows) {
    nlohmann::json j{{"name", row.name},
                     {"outcome", row.outcome ? std::string(outcome_name(*row.outcome)) : "Error"},
                     {"instances", row.instances},
                     {"rule_firings", row.stats.rule_firings},
                     {"ar_inserts", row.stats.ar_inserts},
                     {"ar_row_applications", row.stats.ar_row_applications},
                     {"ar_queries", row.stats.ar_queries},
                     {"queries_resumed", row.stats.queries_resumed},
                     {"ar_rounds", row.stats.ar_rounds},
                     {"proof_steps", row.proof_steps}};
    if (!row.error.empty()) j["error"] = row.error;
    problems.push_back(std::move(j));
    timing.push_back({{"name", row.name},
                      {"build_seconds", row.build_seconds},
                      {"match_seconds", row.match_seconds},
                      {"saturate_seconds", row.saturate_seconds}});
    build += row.build_seconds;
    match += row.match_seconds;
    sat += row.saturate_seconds;
  }
  nlohmann::json aggregate{{"problems", r.rows.size()},
                           {"solved", r.solved()},
                           {"saturated", r.count(Outcome::Saturated)},
                           {"timeout", r.count(Outcome::Timeout)},
                           {"inconsistent", r.count(Outcome::Inconsistent)},
                           {"errors", r.errors()}};
  nlohmann::json metadata{{"timing", std::move(timing)},
                          {"phase_totals",
                           {{"build_seconds", build}, {"match_seconds", match}, {"saturate_seconds", sat},
                            {"total_seconds", build + match + sat}}}};
  return {{"problems", std::move(problems)}, {"aggregate", std::move(aggregate)}, {"metadata", std::move(metadata)}};
}

std::string bench_table(const BenchReport& r) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %-12s %9s %8s %9s %9s %9s\n", "problem", "outcome", "instances", "firings",
                "build_ms", "match_ms", "ddar_ms");
  os << line;
  double build = 0, match = 0, sat = 0;
  for (const BenchRow& row : r.rows) {
    std::string outcome = row.outcome ? std::string(outcome_name(*row.outcome)) : "Error";
    std::snprintf(line, sizeof line, "%-28s %-12s %9zu %8llu %9.2f %9.2f %9.2f\n", row.name.c_str(), outcome.c_str(),
                  row.instances, static_cast<unsigned long long>(row.stats.rule_firings), row.build_seconds * 1e3,
                  row.match_seconds * 1e3, row.saturate_seconds * 1e3);
    os << line;
    if (!row.error.empty()) os << "    " << row.error << '\n';
    build += row.build_seconds;
    match += row.match_seconds;
    sat += row.saturate_seconds;
  }
  std::snprintf(line, sizeof line, "solved %zu/%zu  saturated %zu  timeout %zu  errors %zu\n", r.solved(),
                r.rows.size(), r.count(Outcome::Saturated), r.count(Outcome::Timeout), r.errors());
  os << line;
  std::snprintf(line, sizeof line, "phases: build %.2f ms, match %.2f ms, dd/ar %.2f ms\n", build * 1e3, match * 1e3,
                sat * 1e3);
  os << line;
  return os.str();
}

std::vector<std::string> manifest_mismatches(const BenchReport& r, const nlohmann::json& manifest) {
  std::vector<std::string> out;
  if (!manifest.is_object()) return {"manifest must be a JSON object"};
  for (const BenchRow& row : r.rows) {
    std::string got = row.outcome ? std::string(outcome_name(*row.outcome)) : "Error";
    if (!manifest.contains(row.name)) {
      out.push_back(row.name + ": not in manifest (got " + got + ")");
      continue;
    }
    const auto& want = manifest.at(row.name);
    if (!want.is_string() || want.get<std::string>() != got)
      out.push_back(row.name + ": expected " + want.dump() + ", got " + got);
  }
  for (const auto& [name, want] : manifest.items())
    if (std::none_of(r.rows.begin(), r.rows.end(), [&](const BenchRow& row) { return row.name == name; }))
      out.push_back(name + ": missing from the corpus directory");
  return out;
}

} // namespace geo
