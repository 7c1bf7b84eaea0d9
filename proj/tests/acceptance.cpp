// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "corpus.hpp"
#include "oracles.hpp"
#include "problem_gen.hpp"

#include "geoprover/checker.hpp"
#include "geoprover/proof.hpp"
#include "geoprover/solver.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace geo;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

const std::vector<corpus::Entry>& problems() {
  static const auto all = corpus::load();
  return all;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

// Expected outcomes with the default configuration and with the law of sines.
std::map<std::string, std::string> manifest(const std::string& file) {
  std::map<std::string, std::string> out;
  const nlohmann::json j = read_json(std::string(GEOPROVER_CORPUS_DIR) + "/" + file);
  for (const auto& item : j.items())
    out[item.key()] = item.value().get<std::string>();
  return out;
}

SolveRun solve(const Problem& p, SolverConfig cfg = {}) { return solve_problem(p, builtin_catalog(), cfg); }

int run_cli(const std::vector<std::string>& args) {
  std::string cmd = "'" + std::string(GEOPROVER_CLI) + "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict solve_rate() {
  const auto want = manifest("manifest.json");
  std::size_t proven = 0, designed = 0;
  double slowest = 0;
  std::string slowest_name, bad;
  for (const auto& e : problems()) {
    auto t0 = Clock::now();
    auto run = solve(e.problem);
    double dt = seconds_since(t0);
    if (dt > slowest) slowest = dt, slowest_name = e.name;
    std::string got(outcome_name(run.result.outcome));
    auto it = want.find(e.name);
    if (it == want.end()) {
      bad += " " + e.name + "(not in manifest)";
      continue;
    }
    if (it->second == "GoalProven") ++designed;
    if (got == "GoalProven" && it->second == "GoalProven") ++proven;
    if (got != it->second) bad += " " + e.name + "(" + got + ")";
    if (dt >= 30) bad += " " + e.name + "(took " + std::to_string(dt) + " s)";
  }
  std::ostringstream d;
  d << proven << "/" << designed << " designed-solvable problems proven, saturating problems saturate; slowest "
    << slowest_name << " " << slowest << " s";
  if (!bad.empty()) d << "; mismatches:" << bad;
  return {bad.empty() && designed == 13 && proven == 13, d.str()};
}

struct CorpusProof {
  const corpus::Entry* entry;
  SaturationResult result;
  Proof proof;
};

// Default-configuration proofs, plus the law-of-sines proofs of problems only
// the extension solves.
const std::vector<CorpusProof>& corpus_proofs() {
  static const auto all = [] {
    std::vector<CorpusProof> out;
    for (const auto& e : problems()) {
      auto run = solve(e.problem);
      if (run.result.outcome != Outcome::GoalProven) {
        SolverConfig cfg;
        cfg.law_of_sines = true;
        run = solve(e.problem, cfg);
      }
      if (run.result.outcome != Outcome::GoalProven) continue;
      Proof pr = extract_proof(run.result);
      out.push_back({&e, std::move(run.result), std::move(pr)});
    }
    return out;
  }();
  return all;
}

std::size_t coefficient_count(const nlohmann::json& proof) {
  std::size_t n = 0;
  for (const auto& s : proof["steps"])
    if (s["justification"]["kind"] == "ar")
      for (const auto& c : s["justification"]["certificates"]) n += c["entries"].size();
  return n;
}

nlohmann::json& nth_coefficient(nlohmann::json& proof, std::size_t k) {
  for (auto& s : proof["steps"])
    if (s["justification"]["kind"] == "ar")
      for (auto& c : s["justification"]["certificates"])
        for (auto& e : c["entries"]) {
          if (k == 0) return e;
          --k;
        }
  throw std::out_of_range("coefficient index");
}

Verdict certificate_soundness() {
  std::size_t certs = 0, replayed = 0, tampered = 0, caught = 0, with_coefficients = 0;
  std::string bad;
  const auto dir = std::filesystem::temp_directory_path() / ("geoprover_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(444);
  for (const CorpusProof& cp : corpus_proofs()) {
    const auto& r = cp.result;
    auto lookup = [&](EquationId id) -> const Equation* {
      return id < r.equations.size() ? &r.equations[id].equation : nullptr;
    };
    for (const auto& rec : r.records)
      for (const auto& c : rec.justification.certificates) {
        ++certs;
        if (replay_certificate(c, lookup)) ++replayed;
      }
    for (const auto& step : cp.proof.steps)
      for (const auto& c : step.certificates) {
        ++certs;
        Equation sum(c.target.table());
        for (const auto& e : c.entries) sum.add_scaled(e.equation, e.coefficient);
        if (sum == c.target) ++replayed;
      }

    const std::string problem_path = std::string(GEOPROVER_CORPUS_DIR) + "/" + cp.entry->name;
    const std::string proof_path = (dir / (cp.entry->name + ".json")).string();
    const nlohmann::json good = proof_to_json(cp.proof, cp.entry->problem);
    std::ofstream(proof_path) << good.dump();
    if (run_cli({"check", proof_path, problem_path}) != 0) bad += " " + cp.entry->name + "(untampered rejected)";
    const std::size_t n = coefficient_count(good);
    if (n == 0) continue;
    ++with_coefficients;
    for (int t = 0; t < 50; ++t) {
      nlohmann::json j = good;
      nlohmann::json& entry = nth_coefficient(j, rng() % n);
      Rational q = parse_rational(entry["num"].get<std::string>() + "/" + entry["den"].get<std::string>());
      long delta = static_cast<long>(rng() % 6) - 3;
      if (delta >= 0) ++delta;  // nonzero in [-3, 3]
      q += delta;
      entry["num"] = q.get_num().get_str();
      entry["den"] = q.get_den().get_str();
      std::ofstream(proof_path) << j.dump();
      ++tampered;
      if (run_cli({"check", proof_path, problem_path}) == 1) ++caught;
    }
  }
  std::filesystem::remove_all(dir);
  std::ostringstream d;
  d << replayed << "/" << certs << " certificates replay exactly; " << caught << "/" << tampered
    << " tamperings rejected by check over " << with_coefficients << " proofs with AR coefficients ("
    << corpus_proofs().size() - with_coefficients << " rule-only proofs have none)";
  if (!bad.empty()) d << ";" << bad;
  return {certs > 0 && replayed == certs && caught == tampered && tampered > 0 && bad.empty(), d.str()};
}

Verdict ar_oracle_equivalence() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(333);
  std::size_t sequences = 0, equal = 0, max_vars = 0, max_eqs = 0;
  for (Table t : {Table::Len, Table::LogLen, Table::SqLen}) {
    for (int i = 0; i < 200; ++i) {
      auto sys = oracle::random_system(t, rng);
      std::shuffle(sys.equations.begin(), sys.equations.end(), rng);
      std::set<VarId> vars;
      for (const auto& e : sys.equations)
        for (const auto& term : e.terms()) vars.insert(term.var);
      max_vars = std::max(max_vars, vars.size());
      max_eqs = std::max(max_eqs, sys.equations.size());
      ARTable table(t);
      bool consistent = true;
      for (std::size_t k = 0; k < sys.equations.size(); ++k)
        consistent = consistent && table.insert(sys.equations[k], static_cast<EquationId>(k)).outcome !=
                                       ARTable::Outcome::Inconsistent;
      ++sequences;
      auto batch = oracle::batch_rref(sys.equations);
      if (consistent && batch && table.echelon() == *batch) ++equal;
    }
  }
  double dt = seconds_since(t0);
  std::ostringstream d;
  d << equal << "/" << sequences << " sequences (200 per table, up to " << max_vars << " variables and " << max_eqs
    << " equations) match batch elimination in " << dt << " s";
  return {equal == sequences && dt < 60 && max_vars <= 30 && max_eqs <= 40, d.str()};
}

Verdict resumption_saves_work() {
  std::uint64_t on_total = 0, off_total = 0;
  std::size_t strictly_less = 0;
  std::string worse, names;
  for (const auto& e : problems()) {
    SolverConfig cfg;
    auto on = solve(e.problem, cfg).result.stats.ar_row_applications;
    cfg.resume_queries = false;
    auto off = solve(e.problem, cfg).result.stats.ar_row_applications;
    on_total += on;
    off_total += off;
    if (on < off) ++strictly_less, names += " " + e.name;
    if (on > off) worse += " " + e.name;
  }
  std::ostringstream d;
  d << "row applications " << on_total << " resumed vs " << off_total << " restarted; strictly fewer on "
    << strictly_less << " problems:" << names;
  if (!worse.empty()) d << "; more work on:" << worse;
  return {on_total <= off_total && strictly_less >= 3, d.str()};
}

bool same_configs(const ConfigSet& x, const ConfigSet& y) {
  return x.coll == y.coll && x.cyclic == y.cyclic && x.para == y.para && x.perp == y.perp && x.cong == y.cong &&
         x.midpoint == y.midpoint && x.eqangle == y.eqangle && x.similar == y.similar && x.bisectors == y.bisectors;
}

bool same_instances(const std::vector<RuleInstance>& a, const std::vector<RuleInstance>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].same_key(b[i]) || a[i].binding != b[i].binding) return false;
  return true;
}

Verdict matcher_parity() {
  const double tol = Tolerances{}.check;
  const auto& cat = builtin_catalog();
  std::size_t diagrams = 0, agree = 0, corpus_checked = 0, instances = 0;
  std::string bad;
  auto compare = [&](const Coordinates& c, const std::string& label) {
    ++diagrams;
    ConfigSet fast = detect_configurations(c, tol);
    auto fast_inst = match_rules(fast, cat, c, tol);
    instances += fast_inst.size();
    if (same_configs(fast, oracle::configurations(c, tol)) && same_instances(fast_inst, oracle::match(cat, c, tol)))
      ++agree;
    else
      bad += " " + label;
  };
  for (const auto& e : problems()) {
    if (e.problem.point_count() > 9) continue;
    ++corpus_checked;
    compare(build_diagram(e.problem, 0), e.name);
  }
  std::mt19937_64 rng(555);
  int random = 0;
  while (random < 50) {
    Problem p = parse_problem(gen::random_problem(rng, 5 + rng() % 3));
    Coordinates c;
    try {
      c = build_diagram(p, rng());
    } catch (const DiagramError&) {
      continue;
    }
    ++random;
    compare(c, "random#" + std::to_string(random));
  }
  std::ostringstream d;
  d << agree << "/" << diagrams << " diagrams agree (" << corpus_checked << " corpus, 50 random; " << instances
    << " instances compared)";
  if (!bad.empty()) d << "; differ:" << bad;
  return {agree == diagrams && random == 50, d.str()};
}

Verdict perpendicularity_identity() {
  std::mt19937_64 rng(666);
  std::uniform_real_distribution<double> u(-1, 1);
  auto identity = [](const Coordinates& c) {
    auto sq = [&](PointId p, PointId q) { return norm2(c[p] - c[q]); };
    return std::abs(sq(0, 2) + sq(1, 3) - sq(0, 3) - sq(1, 2)) / (c.scale() * c.scale());
  };
  int right_ok = 0, right = 0;
  double worst = 0;
  while (right < 1000) {
    Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    if (norm(b - a) < 1e-3) continue;
    double t = u(rng);
    if (std::abs(t) < 1e-3) continue;
    Vec2 d{c.x - t * (b.y - a.y), c.y + t * (b.x - a.x)};
    Coordinates pts({a, b, c, d}, 0);
    ++right;
    double r = identity(pts);
    worst = std::max(worst, r);
    if (r <= 1e-9) ++right_ok;
  }
  // Small integer grids make exact right angles common, so both directions
  // of the biconditional are exercised.
  std::uniform_int_distribution<int> g(-3, 3);
  int generic = 0, agree = 0, perpendicular = 0;
  while (generic < 1000) {
    std::vector<Vec2> v;
    for (int i = 0; i < 4; ++i) v.push_back(Vec2{double(g(rng)), double(g(rng))});
    if (norm(v[0] - v[1]) == 0 || norm(v[2] - v[3]) == 0) continue;
    Coordinates pts(v, 0);
    ++generic;
    bool by_identity = identity(pts) <= 1e-9;
    bool by_dot = numeric_holds(Statement(Kind::Perp, std::array<PointId, 4>{0, 1, 2, 3}), pts, 1e-9);
    perpendicular += by_dot;
    if (by_identity == by_dot) ++agree;
  }
  std::ostringstream d;
  d << right_ok << "/1000 constructed right angles satisfy the identity (worst " << worst << "); " << agree
    << "/1000 generic samples agree with the dot test (" << perpendicular << " perpendicular)";
  return {right_ok == 1000 && agree == 1000 && perpendicular > 0 && perpendicular < 1000, d.str()};
}

std::set<std::string> solved(bool law_of_sines) {
  std::set<std::string> out;
  for (const auto& e : problems()) {
    SolverConfig cfg;
    cfg.law_of_sines = law_of_sines;
    if (solve(e.problem, cfg).result.outcome == Outcome::GoalProven) out.insert(e.name);
  }
  return out;
}

Verdict law_of_sines_differential() {
  auto base = solved(false), ext = solved(true);
  std::string gained, lost;
  for (const auto& n : ext)
    if (!base.contains(n)) gained += " " + n;
  for (const auto& n : base)
    if (!ext.contains(n)) lost += " " + n;
  std::ostringstream d;
  d << base.size() << " proven by default, " << ext.size() << " with the law of sines; gained:" << gained;
  if (!lost.empty()) d << "; lost:" << lost;
  return {ext.size() == base.size() + 1 && lost.empty(), d.str()};
}

Verdict order_insensitivity() {
  std::mt19937_64 rng(888);
  std::size_t runs = 0, same = 0;
  std::string bad;
  for (const auto& e : problems()) {
    SolverConfig cfg;
    auto base = solve(e.problem, cfg);
    auto instances =
        match_rules(detect_configurations(base.diagram, cfg.tol.check), builtin_catalog(), base.diagram, cfg.tol.check);
    for (int i = 0; i < 20; ++i) {
      std::shuffle(instances.begin(), instances.end(), rng);
      auto r = saturate(e.problem, base.diagram, instances, cfg);
      ++runs;
      if (r.outcome == base.result.outcome)
        ++same;
      else
        bad += " " + e.name;
    }
  }
  std::ostringstream d;
  d << same << "/" << runs << " shuffled runs keep the outcome (20 per problem)";
  if (!bad.empty()) d << "; changed:" << bad;
  return {same == runs, d.str()};
}

Verdict numeric_audit() {
  const Tolerances tol;
  std::size_t checked = 0, held = 0;
  std::string bad;
  for (bool los : {false, true})
    for (const auto& e : problems()) {
      SolverConfig cfg;
      cfg.law_of_sines = los;
      auto run = solve(e.problem, cfg);
      for (std::uint64_t k = 1; k <= 3; ++k) {
        Coordinates fresh = build_diagram(e.problem, mix_seed(0xa0d17, k));
        for (const auto& rec : run.result.records) {
          ++checked;
          if (numeric_holds(rec.statement, fresh, tol.check))
            ++held;
          else if (bad.size() < 400)
            bad += " " + e.name + ":" + format_statement(rec.statement, e.problem.namer());
        }
      }
    }
  std::ostringstream d;
  d << held << "/" << checked << " established statements hold on 3 fresh diagrams (both configurations)";
  if (!bad.empty()) d << "; failing:" << bad;
  return {held == checked && checked > 0, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"corpus solve rate", solve_rate},
      {"certificate soundness", certificate_soundness},
      {"AR oracle equivalence", ar_oracle_equivalence},
      {"resumable-query no-regression", resumption_saves_work},
      {"matcher brute-force parity", matcher_parity},
      {"perpendicularity identity", perpendicularity_identity},
      {"law-of-sines differential", law_of_sines_differential},
      {"saturation order-insensitivity", order_insensitivity},
      {"end-to-end numeric audit", numeric_audit},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& ex) {
      v = {false, std::string("exception: ") + ex.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
