#include "geoprover/rules.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace geo {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Rule parse_record(std::string_view line, int line_no) {
  Rule r;
  auto words = split_ws(line);
  if (words[0] == "mined")
    r.source = Rule::Source::Mined;
  else if (words[0] != "rule")
    throw CatalogError(line_no, "record must start with 'rule' or 'mined'");

  std::string_view rest = trim(line.substr(line.find(words[0]) + words[0].size()));
  auto colon = rest.find(':');
  if (colon == std::string_view::npos) throw CatalogError(line_no, "missing ':' after rule id");
  r.id = std::string(trim(rest.substr(0, colon)));
  if (r.id.empty() || split_ws(r.id).size() != 1) throw CatalogError(line_no, "bad rule id");
  rest = rest.substr(colon + 1);
  auto arrow = rest.find("=>");
  if (arrow == std::string_view::npos) throw CatalogError(line_no, "missing '=>'");

  std::map<std::string, PointId, std::less<>> vars;
  auto resolve = [&](std::string_view name) -> PointId {
    if (name.size() < 2 || name[0] != '$')
      throw std::invalid_argument("pattern variables must be $-prefixed: '" + std::string(name) + "'");
    auto key = name.substr(1);
    auto it = vars.find(key);
    if (it != vars.end()) return it->second;
    auto id = static_cast<PointId>(r.variables.size());
    r.variables.emplace_back(key);
    vars.emplace(std::string(key), id);
    return id;
  };
  auto parse_pattern = [&](std::string_view text) {
    auto tokens = split_ws(text);
    try {
      return parse_statement(tokens, resolve);
    } catch (const std::invalid_argument& e) {
      throw CatalogError(line_no, e.what());
    }
  };

  std::string_view hyps = rest.substr(0, arrow);
  std::size_t start = 0;
  while (start <= hyps.size()) {
    auto comma = hyps.find(',', start);
    if (comma == std::string_view::npos) comma = hyps.size();
    auto piece = trim(hyps.substr(start, comma - start));
    if (piece.empty()) throw CatalogError(line_no, "empty hypothesis");
    r.hypotheses.push_back(parse_pattern(piece));
    start = comma + 1;
  }
  std::size_t hyp_vars = r.variables.size();
  r.conclusion = parse_pattern(trim(rest.substr(arrow + 2)));
  if (r.variables.size() != hyp_vars)
    throw CatalogError(line_no, "conclusion of '" + r.id + "' uses a variable no hypothesis binds");
  return r;
}

} // namespace

std::vector<Rule> parse_catalog(std::string_view text) {
  std::vector<Rule> out;
  std::set<std::string> ids;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    Rule r = parse_record(trim(line), line_no);
    if (!ids.insert(r.id).second) throw CatalogError(line_no, "duplicate rule id '" + r.id + "'");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Rule> load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read catalog '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_catalog(ss.str());
}

const std::vector<Rule>& builtin_catalog() {
  static const std::vector<Rule> catalog = parse_catalog(builtin_catalog_text());
  return catalog;
}

std::string format_rule(const Rule& r) {
  auto name = [&](PointId v) { return "$" + r.variables[v]; };
  std::string out = (r.source == Rule::Source::Mined ? "mined " : "rule ") + r.id + ":";
  for (std::size_t i = 0; i < r.hypotheses.size(); ++i)
    out += (i ? ", " : " ") + format_statement(r.hypotheses[i], name);
  return out + " => " + format_statement(r.conclusion, name);
}

Statement instantiate(const Statement& pattern, std::span<const PointId> binding) {
  if (pattern.kind() != Kind::AREq) {
    std::array<PointId, 8> args{};
    auto a = pattern.args();
    for (std::size_t i = 0; i < a.size(); ++i) args[i] = binding[a[i]];
    return canonical(Statement(pattern.kind(), std::span<const PointId>(args.data(), a.size())));
  }
  const Equation& e = *pattern.equation();
  Equation out(e.table());
  for (const Term& t : e.terms()) {
    const VarId& v = t.var;
    switch (v.kind) {
      case VarId::Kind::Segment: out.add(VarId::segment(v.table, binding[v.a], binding[v.b]), t.coef); break;
      case VarId::Kind::Sine: out.add(VarId::sine(binding[v.a], binding[v.b], binding[v.c]), t.coef); break;
      case VarId::Kind::LogConst: out.add(v, t.coef); break;
    }
  }
  out.add_constant(e.constant());
  return canonical(Statement(std::move(out)));
}

bool nondegenerate_instance(const Statement& pattern, std::span<const PointId> binding) {
  auto a = pattern.args();
  auto P = [&](std::size_t i) { return binding[a[i]]; };
  auto distinct = [&](std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (P(i) == P(j)) return false;
    return true;
  };
  auto segment_ok = [&](std::size_t i) { return P(i) != P(i + 1); };
  auto same_segment = [&](std::size_t i, std::size_t j) {
    return (P(i) == P(j) && P(i + 1) == P(j + 1)) || (P(i) == P(j + 1) && P(i + 1) == P(j));
  };
  switch (pattern.kind()) {
    case Kind::Coll: return distinct(3);
    case Kind::Cyclic: return distinct(4);
    case Kind::Midpoint: return distinct(3);
    case Kind::Para:
    case Kind::Perp:
    case Kind::Cong: return segment_ok(0) && segment_ok(2) && !same_segment(0, 2);
    case Kind::EqAngle:
      return segment_ok(0) && segment_ok(2) && segment_ok(4) && segment_ok(6) && !same_segment(0, 2) &&
             !same_segment(4, 6);
    case Kind::EqRatio: return segment_ok(0) && segment_ok(2) && segment_ok(4) && segment_ok(6);
    case Kind::AREq:
      for (const Term& t : pattern.equation()->terms()) {
        const VarId& v = t.var;
        if (v.kind == VarId::Kind::Segment && binding[v.a] == binding[v.b]) return false;
        if (v.kind == VarId::Kind::Sine &&
            (binding[v.a] == binding[v.b] || binding[v.b] == binding[v.c] || binding[v.a] == binding[v.c]))
          return false;
      }
      return true;
  }
  return false;
}

const Rule* find_rule(const std::vector<Rule>& catalog, std::string_view id) {
  for (const Rule& r : catalog)
    if (r.id == id) return &r;
  return nullptr;
}

} // namespace geo
