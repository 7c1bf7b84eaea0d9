#include "geoprover/proof.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace geo {

Proof extract_proof(const SaturationResult& r) {
  const StatementRecord* goal = r.find(r.goal);
  if (r.outcome != Outcome::GoalProven || !goal) throw GoalNotProven("goal was not proven");

  auto record_deps = [&](const StatementRecord& rec) {
    std::vector<std::size_t> deps;
    switch (rec.justification.kind) {
      case Justification::Kind::Given: break;
      case Justification::Kind::Rule:
        for (const Statement& h : rec.justification.hypotheses) deps.push_back(r.index.at(h));
        break;
      case Justification::Kind::AR:
        for (const Certificate& c : rec.justification.certificates)
          for (const auto& [id, coef] : c.combination.entries()) {
            const EquationOrigin& o = r.equations[id].origin;
            if (o.kind == EquationOrigin::Kind::Statement) deps.push_back(o.record);
          }
        break;
    }
    std::sort(deps.begin(), deps.end());
    deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
    return deps;
  };

  std::set<std::size_t> slice;
  std::vector<std::size_t> stack{goal->epoch};
  while (!stack.empty()) {
    std::size_t e = stack.back();
    stack.pop_back();
    if (!slice.insert(e).second) continue;
    for (std::size_t d : record_deps(r.records[e])) stack.push_back(d);
  }

  std::unordered_map<std::size_t, std::size_t> step_of;
  Proof pr;
  pr.goal = r.goal;
  for (std::size_t e : slice) {
    const StatementRecord& rec = r.records[e];
    ProofStep st;
    st.index = pr.steps.size();
    st.statement = rec.statement;
    st.kind = rec.justification.kind;
    st.construction_step = rec.justification.construction_step;
    st.rule_id = rec.justification.rule_id;
    st.binding = rec.justification.binding;
    for (const Certificate& c : rec.justification.certificates) {
      ProofCertificate pc;
      pc.target = c.target;
      for (const auto& [id, coef] : c.combination.entries()) {
        const InsertedEquation& ie = r.equations[id];
        CertificateEntry entry;
        if (ie.origin.kind == EquationOrigin::Kind::Statement) {
          entry.source = CertificateEntry::Source::Step;
          entry.step = step_of.at(ie.origin.record);
        } else {
          entry.source = CertificateEntry::Source::LawOfSines;
          entry.triangle = ie.origin.triangle;
        }
        entry.equation = ie.equation;
        entry.coefficient = coef;
        pc.entries.push_back(std::move(entry));
      }
      st.certificates.push_back(std::move(pc));
    }
    for (std::size_t d : record_deps(rec)) st.deps.push_back(step_of.at(d));
    std::sort(st.deps.begin(), st.deps.end());
    step_of.emplace(e, st.index);
    pr.steps.push_back(std::move(st));
  }
  return pr;
}

namespace {

std::string_view kind_tag(Justification::Kind k) {
  switch (k) {
    case Justification::Kind::Given: return "given";
    case Justification::Kind::Rule: return "rule";
    case Justification::Kind::AR: return "ar";
  }
  return "?";
}

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string string_field(const nlohmann::json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::size_t index_field(const nlohmann::json& v, const char* what) {
  if (!v.is_number_unsigned()) throw std::invalid_argument(std::string(what) + " must be a non-negative integer");
  return v.get<std::size_t>();
}

PointResolver resolver(const Problem& p) {
  return [&p](std::string_view name) -> PointId {
    auto id = p.find(name);
    if (!id) throw std::invalid_argument("unknown point '" + std::string(name) + "'");
    return *id;
  };
}

Statement parse_text(const std::string& text, const Problem& p) {
  auto tokens = split_ws(text);
  return parse_statement(tokens, resolver(p));
}

Equation parse_eq(const std::string& text, const Problem& p) {
  Statement s = parse_text(text, p);
  if (s.kind() != Kind::AREq) throw std::invalid_argument("expected an equation, got '" + text + "'");
  return *s.equation();
}

Rational parse_integer_field(const nlohmann::json& j, const char* key) {
  std::string s = string_field(j, key);
  mpz_class z;
  if (s.empty() || z.set_str(s, 10) != 0) throw std::invalid_argument(std::string("field '") + key + "' is not an integer");
  return Rational(z);
}

}  // namespace

nlohmann::json proof_to_json(const Proof& pr, const Problem& p) {
  const PointNamer name = p.namer();
  nlohmann::json steps = nlohmann::json::array();
  for (const ProofStep& st : pr.steps) {
    nlohmann::json just{{"kind", kind_tag(st.kind)}};
    switch (st.kind) {
      case Justification::Kind::Given: just["construction_step"] = st.construction_step; break;
      case Justification::Kind::Rule: {
        just["rule"] = st.rule_id;
        nlohmann::json b = nlohmann::json::array();
        for (PointId q : st.binding) b.push_back(name(q));
        just["binding"] = b;
        break;
      }
      case Justification::Kind::AR: {
        nlohmann::json certs = nlohmann::json::array();
        for (const ProofCertificate& c : st.certificates) {
          nlohmann::json entries = nlohmann::json::array();
          for (const CertificateEntry& e : c.entries) {
            nlohmann::json je;
            if (e.source == CertificateEntry::Source::Step)
              je["step"] = e.step;
            else
              je["law_of_sines"] = {name(e.triangle[0]), name(e.triangle[1]), name(e.triangle[2])};
            je["equation"] = format_equation(e.equation, name);
            je["num"] = e.coefficient.get_num().get_str();
            je["den"] = e.coefficient.get_den().get_str();
            entries.push_back(std::move(je));
          }
          certs.push_back({{"table", table_name(c.target.table())},
                           {"target", format_equation(c.target, name)},
                           {"entries", std::move(entries)}});
        }
        just["certificates"] = std::move(certs);
        break;
      }
    }
    steps.push_back({{"index", st.index},
                     {"statement", format_statement(st.statement, name)},
                     {"justification", std::move(just)},
                     {"deps", st.deps}});
  }
  return {{"goal", format_statement(pr.goal, name)}, {"steps", std::move(steps)}};
}

Proof proof_from_json(const nlohmann::json& j, const Problem& p) {
  Proof pr;
  pr.goal = parse_text(string_field(j, "goal"), p);
  const auto& steps = field(j, "steps");
  if (!steps.is_array()) throw std::invalid_argument("'steps' must be an array");
  for (const auto& js : steps) {
    ProofStep st;
    st.index = index_field(field(js, "index"), "step index");
    st.statement = parse_text(string_field(js, "statement"), p);
    const auto& just = field(js, "justification");
    std::string kind = string_field(just, "kind");
    if (kind == "given") {
      st.kind = Justification::Kind::Given;
      st.construction_step = index_field(field(just, "construction_step"), "construction_step");
    } else if (kind == "rule") {
      st.kind = Justification::Kind::Rule;
      st.rule_id = string_field(just, "rule");
      const auto& b = field(just, "binding");
      if (!b.is_array()) throw std::invalid_argument("'binding' must be an array");
      for (const auto& q : b) {
        if (!q.is_string()) throw std::invalid_argument("binding entries must be point names");
        st.binding.push_back(resolver(p)(q.get<std::string>()));
      }
    } else if (kind == "ar") {
      st.kind = Justification::Kind::AR;
      const auto& certs = field(just, "certificates");
      if (!certs.is_array()) throw std::invalid_argument("'certificates' must be an array");
      for (const auto& jc : certs) {
        ProofCertificate pc;
        pc.target = parse_eq(string_field(jc, "target"), p);
        if (table_name(pc.target.table()) != string_field(jc, "table"))
          throw std::invalid_argument("certificate table does not match its target");
        const auto& entries = field(jc, "entries");
        if (!entries.is_array()) throw std::invalid_argument("'entries' must be an array");
        for (const auto& je : entries) {
          CertificateEntry e;
          if (je.contains("step")) {
            e.source = CertificateEntry::Source::Step;
            e.step = index_field(je.at("step"), "entry step");
          } else {
            e.source = CertificateEntry::Source::LawOfSines;
            const auto& tri = field(je, "law_of_sines");
            if (!tri.is_array() || tri.size() != 3) throw std::invalid_argument("law_of_sines needs three points");
            for (std::size_t k = 0; k < 3; ++k) {
              if (!tri[k].is_string()) throw std::invalid_argument("law_of_sines entries must be point names");
              e.triangle[k] = resolver(p)(tri[k].get<std::string>());
            }
          }
          e.equation = parse_eq(string_field(je, "equation"), p);
          Rational num = parse_integer_field(je, "num");
          Rational den = parse_integer_field(je, "den");
          if (den == 0) throw std::invalid_argument("zero denominator");
          e.coefficient = num / den;
          pc.entries.push_back(std::move(e));
        }
        st.certificates.push_back(std::move(pc));
      }
    } else {
      throw std::invalid_argument("unknown justification kind '" + kind + "'");
    }
    const auto& deps = field(js, "deps");
    if (!deps.is_array()) throw std::invalid_argument("'deps' must be an array");
    for (const auto& d : deps) st.deps.push_back(index_field(d, "dependency"));
    pr.steps.push_back(std::move(st));
  }
  return pr;
}

std::string proof_to_text(const Proof& pr, const Problem& p) {
  const PointNamer name = p.namer();
  std::ostringstream os;
  os << "goal: " << format_statement(pr.goal, name) << '\n';
  for (const ProofStep& st : pr.steps) {
    os << st.index << ". " << format_statement(st.statement, name) << "    ";
    switch (st.kind) {
      case Justification::Kind::Given: {
        const Construction& c = p.constructions[st.construction_step];
        os << "[given by " << p.name(c.out) << "]";
        break;
      }
      case Justification::Kind::Rule: {
        os << "[" << st.rule_id << " from";
        for (std::size_t d : st.deps) os << ' ' << d;
        os << "]";
        break;
      }
      case Justification::Kind::AR: {
        os << "[AR]";
        for (const ProofCertificate& c : st.certificates) {
          os << "\n      " << format_equation(c.target, name) << " =";
          for (const CertificateEntry& e : c.entries) {
            os << "\n        " << (e.coefficient >= 0 ? "+ " : "- ") << to_string(Rational(abs(e.coefficient))) << " * ("
               << format_equation(e.equation, name) << ")";
            if (e.source == CertificateEntry::Source::Step)
              os << "  from " << e.step;
            else
              os << "  law of sines " << name(e.triangle[0]) << name(e.triangle[1]) << name(e.triangle[2]);
          }
        }
        break;
      }
    }
    os << '\n';
  }
  return os.str();
}

} // namespace geo
