#include "geoprover/solver.hpp"

#include "json.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>

namespace geo {

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::GoalProven: return "GoalProven";
    case Outcome::Saturated: return "Saturated";
    case Outcome::Timeout: return "Timeout";
    case Outcome::Inconsistent: return "Inconsistent";
  }
  return "?";
}

const StatementRecord* SaturationResult::find(const Statement& s) const {
  auto it = index.find(s);
  return it == index.end() ? nullptr : &records[it->second];
}

namespace {

using Clock = std::chrono::steady_clock;

// Sines this small are treated as undefined and never enter a table.
constexpr double kSineFloor = 1e-6;

std::size_t table_slot(Table t) { return static_cast<std::size_t>(t); }

class Saturator {
public:
  Saturator(const Problem& p, const Coordinates& diagram, const std::vector<RuleInstance>& instances,
            const SolverConfig& cfg, std::optional<Deadline> deadline)
      : p_(p), diagram_(diagram), instances_(instances), cfg_(cfg), deadline_(deadline),
        tables_{ARTable(Table::Len, cfg.resume_queries), ARTable(Table::LogLen, cfg.resume_queries),
                ARTable(Table::SqLen, cfg.resume_queries)} {
    opts_.law_of_sines = cfg.law_of_sines;
    res_.goal = canonical(p.goal);
  }

  SaturationResult run();

private:
  bool timed_out() const { return deadline_ && Clock::now() >= *deadline_; }
  void establish(const Statement& s, Justification j);
  void fire(std::size_t i);
  void insert_statement(std::size_t epoch);
  void insert_one(const Equation& e, const EquationOrigin& origin);
  std::size_t total_rows() const;
  bool sines_defined(const Equation& e) const;
  std::optional<std::vector<Certificate>> try_prove(const Statement& s);
  bool run_queries();
  void collect_query_targets();
  void report_inconsistent(Table t, const Certificate& contradiction);
  SaturationResult finish(Outcome o);

  const Problem& p_;
  const Coordinates& diagram_;
  const std::vector<RuleInstance>& instances_;
  const SolverConfig& cfg_;
  std::optional<Deadline> deadline_;
  EncodingOptions opts_;
  std::array<ARTable, 3> tables_;
  SaturationResult res_;
  Clock::time_point start_ = Clock::now();

  std::deque<std::size_t> queue_;  // epochs whose equations are not inserted yet
  std::deque<std::size_t> ready_;  // instances with all hypotheses established
  std::vector<std::size_t> remaining_;
  std::vector<bool> fired_;
  std::unordered_map<Statement, std::vector<std::size_t>, StatementHash> watchers_;
  std::vector<Statement> query_targets_;
  bool goal_proven_ = false;
  bool inconsistent_ = false;
};

void Saturator::establish(const Statement& s, Justification j) {
  if (res_.index.contains(s)) return;
  std::size_t epoch = res_.records.size();
  res_.records.push_back(StatementRecord{s, StatementRecord::Status::Established, std::move(j), epoch});
  res_.index.emplace(s, epoch);
  queue_.push_back(epoch);
  if (auto it = watchers_.find(s); it != watchers_.end())
    for (std::size_t i : it->second)
      if (--remaining_[i] == 0) ready_.push_back(i);
  if (s == res_.goal) goal_proven_ = true;
}

void Saturator::fire(std::size_t i) {
  if (fired_[i]) return;
  fired_[i] = true;
  ++res_.stats.rule_firings;
  const RuleInstance& inst = instances_[i];
  Justification j;
  j.kind = Justification::Kind::Rule;
  j.rule_id = inst.rule_id;
  j.binding = inst.binding;
  j.hypotheses = inst.hypotheses;
  establish(inst.conclusion, std::move(j));
}

std::size_t Saturator::total_rows() const {
  std::size_t n = 0;
  for (const ARTable& t : tables_) n += t.rows().size();
  return n;
}

bool Saturator::sines_defined(const Equation& e) const {
  for (const Term& t : e.terms())
    if (t.var.kind == VarId::Kind::Sine &&
        abs_sine(diagram_, static_cast<PointId>(t.var.a), static_cast<PointId>(t.var.b),
                 static_cast<PointId>(t.var.c)) < kSineFloor)
      return false;
  return true;
}

void Saturator::insert_one(const Equation& e, const EquationOrigin& origin) {
  if (!sines_defined(e)) return;
  EquationId id = static_cast<EquationId>(res_.equations.size());
  res_.equations.push_back(InsertedEquation{e, origin});
  ARTable& t = tables_[table_slot(e.table())];
  auto report = t.insert(e, id);
  if (report.outcome == ARTable::Outcome::Inconsistent) report_inconsistent(e.table(), *report.contradiction);
}

void Saturator::insert_statement(std::size_t epoch) {
  const Statement& s = res_.records[epoch].statement;
  std::vector<Equation> eqs;
  try {
    eqs = statement_to_equations(s, opts_);
  } catch (const ExtensionDisabled&) {
    return;  // a sine payload established by a rule while the extension is off
  }
  for (const Equation& e : eqs) {
    insert_one(e, EquationOrigin{EquationOrigin::Kind::Statement, epoch, {}});
    if (inconsistent_) return;
  }
}

std::optional<std::vector<Certificate>> Saturator::try_prove(const Statement& s) {
  std::vector<Encoding> encs;
  try {
    encs = encode(s, opts_);
  } catch (const ExtensionDisabled&) {
    return std::nullopt;
  }
  for (const Encoding& enc : encs) {
    if (!enc.provable) continue;
    std::vector<Certificate> certs;
    for (const Equation& e : enc.equations) {
      auto cert = tables_[table_slot(enc.table)].query(e);
      if (!cert) break;
      certs.push_back(std::move(*cert));
    }
    if (certs.size() == enc.equations.size()) return certs;
  }
  return std::nullopt;
}

void Saturator::collect_query_targets() {
  std::vector<Statement> all{res_.goal};
  for (const RuleInstance& inst : instances_)
    all.insert(all.end(), inst.hypotheses.begin(), inst.hypotheses.end());
  std::sort(all.begin() + 1, all.end());
  all.erase(std::unique(all.begin() + 1, all.end()), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i > 0 && all[i] == res_.goal) continue;
    bool provable = false;
    try {
      for (const Encoding& enc : encode(all[i], opts_)) provable = provable || enc.provable;
    } catch (const ExtensionDisabled&) {
    }
    if (provable) query_targets_.push_back(all[i]);
  }
}

bool Saturator::run_queries() {
  ++res_.stats.ar_rounds;
  bool progress = false;
  for (const Statement& s : query_targets_) {
    if (res_.index.contains(s)) continue;
    if (timed_out()) return progress;
    auto certs = try_prove(s);
    if (!certs) continue;
    Justification j;
    j.kind = Justification::Kind::AR;
    j.certificates = std::move(*certs);
    establish(s, std::move(j));
    progress = true;
    if (goal_proven_) return true;
  }
  return progress;
}

void Saturator::report_inconsistent(Table t, const Certificate& contradiction) {
  inconsistent_ = true;
  const PointNamer name = p_.namer();
  res_.diagnostic = "inconsistent " + std::string(table_name(t)) +
                    " table: inserted equations sum to " + format_equation(contradiction.target, name);
  nlohmann::json bundle;
  bundle["problem"] = serialize_problem(p_);
  bundle["seed"] = cfg_.seed;
  bundle["law_of_sines"] = cfg_.law_of_sines;
  bundle["table"] = std::string(table_name(t));
  nlohmann::json comb = nlohmann::json::array();
  for (const auto& [id, coef] : contradiction.combination.entries())
    comb.push_back({{"equation", id}, {"coefficient", to_string(coef)}});
  bundle["contradiction"] = comb;
  nlohmann::json log = nlohmann::json::array();
  for (std::size_t i = 0; i < res_.equations.size(); ++i) {
    const InsertedEquation& ie = res_.equations[i];
    nlohmann::json row{{"id", i}, {"equation", format_equation(ie.equation, name)}};
    if (ie.origin.kind == EquationOrigin::Kind::Statement)
      row["statement"] = format_statement(res_.records[ie.origin.record].statement, name);
    else
      row["law_of_sines"] = {name(ie.origin.triangle[0]), name(ie.origin.triangle[1]), name(ie.origin.triangle[2])};
    log.push_back(std::move(row));
  }
  bundle["equations"] = log;
  try {
    namespace fs = std::filesystem;
    fs::path dir = cfg_.repro_dir.empty() ? fs::temp_directory_path() : fs::path(cfg_.repro_dir);
    fs::create_directories(dir);
    fs::path file = dir / ("geoprover-repro-" + std::to_string(std::hash<std::string>{}(serialize_problem(p_))) +
                           "-" + std::to_string(cfg_.seed) + ".json");
    std::ofstream out(file);
    out << bundle.dump(2) << '\n';
    if (out) res_.repro_path = file.string();
  } catch (const std::exception&) {
  }
}

SaturationResult Saturator::finish(Outcome o) {
  res_.outcome = o;
  for (const ARTable& t : tables_) {
    res_.stats.ar_inserts += t.counters().inserts;
    res_.stats.ar_row_applications += t.counters().row_applications;
    res_.stats.ar_queries += t.counters().queries;
    res_.stats.queries_resumed += t.counters().resumed;
  }
  res_.stats.instances = instances_.size();
  res_.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
  return std::move(res_);
}

SaturationResult Saturator::run() {
  if (opts_.law_of_sines) {
    const std::size_t n = p_.point_count();
    for (PointId a = 0; a < n; ++a)
      for (PointId b = a + 1; b < n; ++b)
        for (PointId c = b + 1; c < n; ++c) {
          if (!nondegenerate_triangle(diagram_, a, b, c, cfg_.tol.check)) continue;
          for (const Equation& e : law_of_sines_equations({a, b, c}, opts_))
            insert_one(e, EquationOrigin{EquationOrigin::Kind::LawOfSines, 0, {a, b, c}});
          if (inconsistent_) return finish(Outcome::Inconsistent);
        }
  }

  remaining_.resize(instances_.size());
  fired_.assign(instances_.size(), false);
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    remaining_[i] = instances_[i].hypotheses.size();
    for (const Statement& h : instances_[i].hypotheses) watchers_[h].push_back(i);
    if (remaining_[i] == 0) ready_.push_back(i);
  }
  collect_query_targets();

  for (std::size_t step = 0; step < p_.constructions.size(); ++step)
    for (const Statement& s : p_.constructions[step].implied) {
      Justification j;
      j.kind = Justification::Kind::Given;
      j.construction_step = step;
      establish(s, std::move(j));
    }
  if (goal_proven_) return finish(Outcome::GoalProven);

  // Rounds: insert everything newly established, query pending targets,
  // then fire the instances that were ready at the start of the round.
  std::size_t rows_at_last_query = 0;
  bool first_round = true;
  while (true) {
    if (timed_out()) return finish(Outcome::Timeout);
    while (!queue_.empty()) {
      std::size_t epoch = queue_.front();
      queue_.pop_front();
      insert_statement(epoch);
      if (inconsistent_) return finish(Outcome::Inconsistent);
      if (timed_out()) return finish(Outcome::Timeout);
    }
    bool progress = false;
    const std::size_t rows = total_rows();
    if (first_round || rows != rows_at_last_query) {
      rows_at_last_query = rows;
      first_round = false;
      progress = run_queries();
      if (goal_proven_) return finish(Outcome::GoalProven);
    }
    // One deduction layer per round: instances readied by these firings wait
    // for the next round, after their conclusions reach the tables.
    for (std::size_t layer = ready_.size(); layer > 0; --layer) {
      std::size_t i = ready_.front();
      ready_.pop_front();
      fire(i);
      progress = true;
      if (goal_proven_) return finish(Outcome::GoalProven);
      if (timed_out()) return finish(Outcome::Timeout);
    }
    if (!progress && queue_.empty()) return finish(timed_out() ? Outcome::Timeout : Outcome::Saturated);
  }
}

}  // namespace

SaturationResult saturate(const Problem& p, const Coordinates& diagram, const std::vector<RuleInstance>& instances,
                          const SolverConfig& cfg, std::optional<Deadline> deadline) {
  return Saturator(p, diagram, instances, cfg, deadline).run();
}

SolveRun solve_problem(const Problem& p, const std::vector<Rule>& catalog, const SolverConfig& cfg) {
  auto t0 = Clock::now();
  double budget = std::clamp(cfg.timeout_seconds, 0.0, 1e9);
  Deadline deadline = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(budget));
  SolveRun run;
  run.diagram = build_diagram(p, cfg.seed, cfg.tol);
  auto t1 = Clock::now();
  ConfigSet cs = detect_configurations(run.diagram, cfg.tol.check);
  std::vector<RuleInstance> instances = match_rules(cs, catalog, run.diagram, cfg.tol.check);
  run.instance_count = instances.size();
  auto t2 = Clock::now();
  run.result = saturate(p, run.diagram, instances, cfg, deadline);
  auto t3 = Clock::now();
  run.build_seconds = std::chrono::duration<double>(t1 - t0).count();
  run.match_seconds = std::chrono::duration<double>(t2 - t1).count();
  run.saturate_seconds = std::chrono::duration<double>(t3 - t2).count();
  return run;
}

} // namespace geo
