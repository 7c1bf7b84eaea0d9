#include "geoprover/checker.hpp"

#include "geoprover/encoding.hpp"

#include <algorithm>

namespace geo {

namespace {

class Failure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] void fail(const ProofStep& st, const std::string& what) {
  throw Failure("step " + std::to_string(st.index) + ": " + what);
}

constexpr double kSineFloor = 1e-6;

void check_sines_defined(const ProofStep& st, const Equation& e, const Coordinates& c) {
  for (const Term& t : e.terms())
    if (t.var.kind == VarId::Kind::Sine &&
        abs_sine(c, static_cast<PointId>(t.var.a), static_cast<PointId>(t.var.b), static_cast<PointId>(t.var.c)) <
            kSineFloor)
      fail(st, "certificate uses the sine of a degenerate angle");
}

void check_given(const ProofStep& st, const Problem& p, const Statement& s) {
  if (st.construction_step >= p.constructions.size()) fail(st, "construction step out of range");
  const auto& implied = p.constructions[st.construction_step].implied;
  if (std::find(implied.begin(), implied.end(), s) == implied.end())
    fail(st, "statement is not implied by construction of " + p.name(p.constructions[st.construction_step].out));
  if (!st.deps.empty()) fail(st, "given step has dependencies");
}

void check_rule(const ProofStep& st, const Proof& pr, const std::vector<Rule>& catalog, const Statement& s) {
  const Rule* rule = find_rule(catalog, st.rule_id);
  if (!rule) fail(st, "unknown rule '" + st.rule_id + "'");
  if (st.binding.size() != rule->variable_count()) fail(st, "binding size does not match rule " + rule->id);
  if (instantiate(rule->conclusion, st.binding) != s) fail(st, "conclusion does not match rule " + rule->id);
  std::vector<std::size_t> needed;
  for (const Statement& h : rule->hypotheses) {
    Statement hs = instantiate(h, st.binding);
    auto it = std::find_if(st.deps.begin(), st.deps.end(),
                           [&](std::size_t d) { return canonical(pr.steps[d].statement) == hs; });
    if (it == st.deps.end()) fail(st, "hypothesis of " + rule->id + " is not among the dependencies");
    needed.push_back(*it);
  }
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
  if (needed != st.deps) fail(st, "dependencies do not match the hypotheses of " + rule->id);
}

void check_ar(const ProofStep& st, const Proof& pr, const Statement& s, const Coordinates& fresh) {
  EncodingOptions opts{true};
  std::vector<Equation> targets;
  for (const ProofCertificate& c : st.certificates) targets.push_back(c.target);
  bool matches = false;
  for (const Encoding& enc : encode(s, opts)) {
    if (!enc.provable || enc.equations.size() != targets.size()) continue;
    bool all = std::all_of(enc.equations.begin(), enc.equations.end(), [&](const Equation& e) {
      return std::find(targets.begin(), targets.end(), e) != targets.end();
    });
    if (all) matches = true;
  }
  if (!matches) fail(st, "certificate targets do not encode the statement");

  std::vector<std::size_t> cited;
  for (const ProofCertificate& c : st.certificates) {
    Equation sum(c.target.table());
    for (const CertificateEntry& e : c.entries) {
      if (e.equation.table() != sum.table()) fail(st, "certificate mixes tables");
      if (e.source == CertificateEntry::Source::Step) {
        if (e.step >= st.index) fail(st, "certificate cites a later step");
        auto eqs = statement_to_equations(canonical(pr.steps[e.step].statement), opts);
        if (std::find(eqs.begin(), eqs.end(), e.equation) == eqs.end())
          fail(st, "cited equation is not an encoding of step " + std::to_string(e.step));
        cited.push_back(e.step);
      } else {
        auto tri = e.triangle;
        if (!nondegenerate_triangle(fresh, tri[0], tri[1], tri[2], 1e-7))
          fail(st, "law of sines cited for a degenerate triangle");
        auto eqs = law_of_sines_equations(tri, opts);
        if (std::find(eqs.begin(), eqs.end(), e.equation) == eqs.end())
          fail(st, "cited equation is not a law of sines relation");
      }
      check_sines_defined(st, e.equation, fresh);
      sum.add_scaled(e.equation, e.coefficient);
    }
    if (sum != c.target) fail(st, "certificate mismatch: cited equations do not sum to the target");
  }
  std::sort(cited.begin(), cited.end());
  cited.erase(std::unique(cited.begin(), cited.end()), cited.end());
  if (cited != st.deps) fail(st, "dependencies do not match the certificate");
}

}  // namespace

bool verify_proof(const Proof& pr, const Problem& p, const std::vector<Rule>& catalog, const CheckOptions& opts,
                  std::string* diagnostic) {
  try {
    if (pr.steps.empty()) throw Failure("proof has no steps");
    if (canonical(pr.goal) != canonical(p.goal)) throw Failure("proof goal differs from the problem goal");
    if (canonical(pr.steps.back().statement) != canonical(p.goal)) throw Failure("last step is not the goal");

    Coordinates fresh;
    try {
      fresh = build_diagram(p, opts.seed, opts.tol);
    } catch (const DiagramError& e) {
      throw Failure(std::string("could not sample a check diagram: ") + e.what());
    }

    for (std::size_t i = 0; i < pr.steps.size(); ++i) {
      const ProofStep& st = pr.steps[i];
      if (st.index != i) fail(st, "index out of order");
      for (std::size_t k = 0; k < st.deps.size(); ++k) {
        if (st.deps[k] >= i) fail(st, "dependency " + std::to_string(st.deps[k]) + " does not precede it");
        if (k > 0 && st.deps[k] <= st.deps[k - 1]) fail(st, "dependencies not strictly increasing");
      }
      for (PointId q : points_of(st.statement))
        if (q >= p.point_count()) fail(st, "statement mentions an unknown point");
      Statement s = canonical(st.statement);
      switch (st.kind) {
        case Justification::Kind::Given: check_given(st, p, s); break;
        case Justification::Kind::Rule: check_rule(st, pr, catalog, s); break;
        case Justification::Kind::AR: check_ar(st, pr, s, fresh); break;
      }
      if (!numeric_holds(s, fresh, opts.tol.check)) fail(st, "statement fails on an independent diagram");
    }
  } catch (const std::exception& e) {
    if (diagnostic) *diagnostic = e.what();
    return false;
  }
  if (diagnostic) diagnostic->clear();
  return true;
}

} // namespace geo
