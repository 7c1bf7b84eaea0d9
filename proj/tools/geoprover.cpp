#include "geoprover/bench.hpp"
#include "geoprover/checker.hpp"
#include "geoprover/proof.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum Exit { kProven = 0, kSaturated = 1, kTimeout = 2, kInputError = 3, kInternalFault = 4 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + out_path);
}

struct CommonFlags {
  geo::SolverConfig cfg;
  std::string catalog_path;
  std::string out_path;
  bool json = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.cfg.seed, "diagram seed")->envname("GEOPROVER_SEED");
  cmd->add_option("--timeout", f.cfg.timeout_seconds, "seconds per problem")->envname("GEOPROVER_TIMEOUT");
  cmd->add_flag("--law-of-sines", f.cfg.law_of_sines, "add sines and the law of sines to the ratio table")
      ->envname("GEOPROVER_LAW_OF_SINES");
  cmd->add_option("--catalog", f.catalog_path, "rule catalog file (default: built-in)")
      ->envname("GEOPROVER_CATALOG");
  cmd->add_option("--out", f.out_path, "write the result here instead of stdout")->envname("GEOPROVER_OUT");
  cmd->add_flag("--json", f.json, "JSON output")->envname("GEOPROVER_JSON");
}

std::vector<geo::Rule> load_catalog(const std::string& path) {
  return path.empty() ? geo::builtin_catalog() : geo::load_catalog_file(path);
}

int cmd_solve(const std::string& file, const CommonFlags& f, bool dump_diagram, bool trace) {
  geo::Problem p;
  std::vector<geo::Rule> catalog;
  try {
    p = geo::parse_problem(read_file(file));
    catalog = load_catalog(f.catalog_path);
  } catch (const geo::ParseError& e) {
    std::cerr << file << ": " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kInputError;
  }

  geo::SolveRun run;
  try {
    run = geo::solve_problem(p, catalog, f.cfg);
  } catch (const geo::DiagramError& e) {
    std::cerr << file << ": " << e.what() << '\n';
    return kInputError;
  }
  if (dump_diagram) std::cerr << geo::diagram_to_json(p, run.diagram).dump(2) << '\n';

  const auto& r = run.result;
  if (trace)
    for (const auto& rec : r.records) {
      std::cerr << rec.epoch << ". " << geo::format_statement(rec.statement, p.namer());
      if (rec.justification.kind == geo::Justification::Kind::Rule) std::cerr << "  [" << rec.justification.rule_id << "]";
      if (rec.justification.kind == geo::Justification::Kind::AR) std::cerr << "  [AR]";
      std::cerr << '\n';
    }
  std::cerr << geo::outcome_name(r.outcome) << ": " << r.stats.rule_firings << " rule firings, "
            << r.stats.ar_row_applications << " AR row applications, " << r.records.size()
            << " statements established\n";
  switch (r.outcome) {
    case geo::Outcome::GoalProven: {
      geo::Proof pr = geo::extract_proof(r);
      try {
        write_output(f.out_path, f.json ? geo::proof_to_json(pr, p).dump(2) + "\n" : geo::proof_to_text(pr, p));
      } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return kInputError;
      }
      return kProven;
    }
    case geo::Outcome::Saturated: return kSaturated;
    case geo::Outcome::Timeout: return kTimeout;
    case geo::Outcome::Inconsistent:
      std::cerr << r.diagnostic << '\n';
      if (r.repro_path) std::cerr << "reproduction bundle: " << *r.repro_path << '\n';
      return kInternalFault;
  }
  return kInternalFault;
}

int cmd_bench(const std::string& dir, const CommonFlags& f, unsigned jobs, const std::string& manifest_path) {
  std::vector<geo::Rule> catalog;
  nlohmann::json manifest;
  try {
    catalog = load_catalog(f.catalog_path);
    if (!std::filesystem::is_directory(dir)) throw std::runtime_error(dir + " is not a directory");
    if (!manifest_path.empty()) manifest = nlohmann::json::parse(read_file(manifest_path));
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kInputError;
  }
  geo::BenchReport report = geo::run_bench(dir, catalog, f.cfg, jobs);
  std::string json = geo::bench_to_json(report).dump(2) + "\n";
  try {
    if (!f.out_path.empty()) write_output(f.out_path, json);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kInputError;
  }
  if (f.json && f.out_path.empty())
    std::cout << json;
  else
    std::cout << geo::bench_table(report);
  if (!manifest_path.empty()) {
    auto bad = geo::manifest_mismatches(report, manifest);
    for (const auto& line : bad) std::cerr << "manifest: " << line << '\n';
    if (!bad.empty()) return 1;
  }
  return 0;
}

int cmd_check(const std::string& proof_path, const std::string& problem_path, const std::string& catalog_path,
              std::uint64_t seed) {
  try {
    geo::Problem p = geo::parse_problem(read_file(problem_path));
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(proof_path));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(std::string("proof parse error: ") + e.what());
    }
    geo::Proof pr;
    try {
      pr = geo::proof_from_json(j, p);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("proof parse error: ") + e.what());
    }
    geo::CheckOptions opts;
    opts.seed = seed;
    std::string diag;
    if (!geo::verify_proof(pr, p, load_catalog(catalog_path), opts, &diag)) {
      std::cerr << "check failed: " << diag << '\n';
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  std::cout << "proof ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geoprover: numeric rule matching with deductive and algebraic saturation"};
  app.require_subcommand(1);

  CommonFlags solve_flags;
  std::string solve_file;
  bool dump_diagram = false;
  bool trace = false;
  auto* solve = app.add_subcommand("solve", "prove the goal of one problem file");
  solve->add_option("file", solve_file, "problem file")->required();
  add_common(solve, solve_flags);
  solve->add_flag("--dump-diagram", dump_diagram, "print the sampled coordinates as JSON on stderr")
      ->envname("GEOPROVER_DUMP_DIAGRAM");
  solve->add_flag("--trace", trace, "list every established statement on stderr");

  CommonFlags bench_flags;
  std::string bench_dir, manifest_path;
  unsigned jobs = 0;
  auto* bench = app.add_subcommand("bench", "run every *.geo file in a directory");
  bench->add_option("dir", bench_dir, "corpus directory")->required();
  add_common(bench, bench_flags);
  bench->add_option("--jobs", jobs, "worker threads (0 = all cores)")->envname("GEOPROVER_JOBS");
  bench->add_option("--manifest", manifest_path, "expected outcomes; mismatches exit 1")
      ->envname("GEOPROVER_MANIFEST");
  bool dump_unused = false;
  bench->add_flag("--dump-diagram", dump_unused, "accepted for symmetry with solve; ignored");

  std::string proof_path, problem_path, check_catalog;
  std::uint64_t check_seed = geo::CheckOptions{}.seed;
  auto* check = app.add_subcommand("check", "verify a JSON proof against its problem");
  check->add_option("proof", proof_path, "proof JSON")->required();
  check->add_option("problem", problem_path, "problem file")->required();
  check->add_option("--catalog", check_catalog, "rule catalog file (default: built-in)")
      ->envname("GEOPROVER_CATALOG");
  check->add_option("--seed", check_seed, "seed of the independent diagram")->envname("GEOPROVER_CHECK_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  if (*solve) return cmd_solve(solve_file, solve_flags, dump_diagram, trace);
  if (*bench) return cmd_bench(bench_dir, bench_flags, jobs, manifest_path);
  return cmd_check(proof_path, problem_path, check_catalog, check_seed);
}
