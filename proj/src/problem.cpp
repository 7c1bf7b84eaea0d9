#include "geoprover/problem.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

namespace geo {

std::string_view code_name(ParseError::Code c) {
  switch (c) {
    case ParseError::Code::UnknownConstructor: return "UnknownConstructor";
    case ParseError::Code::ArityMismatch: return "ArityMismatch";
    case ParseError::Code::UndeclaredPoint: return "UndeclaredPoint";
    case ParseError::Code::MissingGoal: return "MissingGoal";
    case ParseError::Code::Syntax: return "Syntax";
  }
  return "?";
}

ParseError::ParseError(Code code, int line, const std::string& detail)
    : std::runtime_error(std::string(code_name(code)) + " (line " + std::to_string(line) + "): " + detail),
      code_(code),
      line_(line) {}

std::optional<PointId> Problem::find(std::string_view n) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == n) return static_cast<PointId>(i);
  return std::nullopt;
}

std::vector<std::pair<Statement, std::size_t>> Problem::implied_facts() const {
  std::vector<std::pair<Statement, std::size_t>> out;
  for (std::size_t i = 0; i < constructions.size(); ++i)
    for (const Statement& s : constructions[i].implied) out.emplace_back(s, i);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

Statement make(Kind k, std::initializer_list<PointId> args) {
  return canonical(Statement(k, std::span<const PointId>(args.begin(), args.size())));
}

void object_facts(const GeomObject& o, PointId x, std::vector<Statement>& out) {
  const auto& p = o.pts;
  switch (o.kind) {
    case GeomObject::Kind::Line: out.push_back(make(Kind::Coll, {x, p[0], p[1]})); break;
    case GeomObject::Kind::PLine: out.push_back(make(Kind::Para, {x, p[0], p[1], p[2]})); break;
    case GeomObject::Kind::TLine: out.push_back(make(Kind::Perp, {x, p[0], p[1], p[2]})); break;
    case GeomObject::Kind::Circle: out.push_back(make(Kind::Cong, {p[0], x, p[0], p[1]})); break;
  }
}

struct ObjectSyntax {
  std::string_view word;
  GeomObject::Kind kind;
  std::size_t points;
};

constexpr std::array<ObjectSyntax, 4> kObjects = {{{"line", GeomObject::Kind::Line, 2},
                                                   {"pline", GeomObject::Kind::PLine, 3},
                                                   {"tline", GeomObject::Kind::TLine, 3},
                                                   {"circle", GeomObject::Kind::Circle, 2}}};

std::string_view object_word(GeomObject::Kind k) {
  for (const auto& o : kObjects)
    if (o.kind == k) return o.word;
  return "?";
}

// Fixed-arity constructors: word, kind, number of point arguments.
struct CtorSyntax {
  std::string_view word;
  ConstructionKind kind;
  std::size_t points;
};

constexpr std::array<CtorSyntax, 10> kCtors = {{{"free", ConstructionKind::FreePoint, 0},
                                                {"on_line", ConstructionKind::OnLine, 2},
                                                {"on_circle", ConstructionKind::OnCircle, 2},
                                                {"on_pline", ConstructionKind::ParallelThrough, 3},
                                                {"on_tline", ConstructionKind::PerpendicularThrough, 3},
                                                {"midpoint", ConstructionKind::Midpoint, 2},
                                                {"foot", ConstructionKind::Foot, 3},
                                                {"circumcenter", ConstructionKind::Circumcenter, 3},
                                                {"reflect", ConstructionKind::Reflect, 3},
                                                {"intersect", ConstructionKind::Intersect, 0}}};

bool valid_name(std::string_view n) {
  if (n.empty() || n == "sin" || n == "log" || n == "?") return false;
  auto ok_first = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  if (!ok_first(n[0])) return false;
  return std::all_of(n.begin(), n.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

} // namespace

std::vector<Statement> implied_statements(const Construction& c) {
  std::vector<Statement> out;
  PointId x = c.out;
  const auto& in = c.in;
  switch (c.kind) {
    case ConstructionKind::FreePoint: break;
    case ConstructionKind::OnLine:
    case ConstructionKind::OnCircle:
    case ConstructionKind::ParallelThrough:
    case ConstructionKind::PerpendicularThrough:
    case ConstructionKind::Intersect:
      for (const auto& o : c.objects) object_facts(o, x, out);
      break;
    case ConstructionKind::Midpoint:
      out.push_back(make(Kind::Midpoint, {x, in[0], in[1]}));
      out.push_back(make(Kind::Coll, {x, in[0], in[1]}));
      out.push_back(make(Kind::Cong, {in[0], x, x, in[1]}));
      break;
    case ConstructionKind::Foot:
      out.push_back(make(Kind::Coll, {x, in[1], in[2]}));
      out.push_back(make(Kind::Perp, {in[0], x, in[1], in[2]}));
      break;
    case ConstructionKind::Circumcenter:
      out.push_back(make(Kind::Cong, {x, in[0], x, in[1]}));
      out.push_back(make(Kind::Cong, {x, in[0], x, in[2]}));
      out.push_back(make(Kind::Cong, {x, in[1], x, in[2]}));
      break;
    case ConstructionKind::Reflect:
      out.push_back(make(Kind::Perp, {in[0], x, in[1], in[2]}));
      out.push_back(make(Kind::Cong, {in[1], in[0], in[1], x}));
      out.push_back(make(Kind::Cong, {in[2], in[0], in[2], x}));
      break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Problem parse_problem(std::string_view text) {
  Problem p;
  std::map<std::string, PointId, std::less<>> ids;
  bool have_goal = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    std::size_t seg_start = 0;
    while (seg_start <= raw.size()) {
      std::size_t semi = raw.find(';', seg_start);
      if (semi == std::string_view::npos) semi = raw.size();
      std::string_view seg = raw.substr(seg_start, semi - seg_start);
      seg_start = semi + 1;
      auto tokens = split_ws(seg);
      if (tokens.empty()) continue;

      auto resolve = [&](std::string_view n) -> PointId {
        auto it = ids.find(n);
        if (it == ids.end())
          throw ParseError(ParseError::Code::UndeclaredPoint, line_no, "undeclared point '" + std::string(n) + "'");
        return it->second;
      };

      if (have_goal)
        throw ParseError(ParseError::Code::Syntax, line_no, "nothing may follow the goal line");

      if (tokens[0].front() == '?') {
        if (tokens[0].size() > 1) {
          tokens[0].erase(0, 1);
          tokens.insert(tokens.begin(), "?");
        }
        std::vector<std::string> pred(tokens.begin() + 1, tokens.end());
        if (pred.empty()) throw ParseError(ParseError::Code::Syntax, line_no, "empty goal");
        auto kind = parse_kind(pred[0]);
        if (!kind)
          throw ParseError(ParseError::Code::UnknownConstructor, line_no, "unknown predicate '" + pred[0] + "'");
        if (*kind != Kind::AREq && pred.size() - 1 != arity(*kind))
          throw ParseError(ParseError::Code::ArityMismatch, line_no,
                           "'" + pred[0] + "' takes " + std::to_string(arity(*kind)) + " points");
        try {
          p.goal = canonical(parse_statement(pred, resolve));
        } catch (const std::invalid_argument& e) {
          throw ParseError(ParseError::Code::Syntax, line_no, e.what());
        }
        have_goal = true;
        continue;
      }

      if (tokens.size() < 3 || tokens[1] != "=")
        throw ParseError(ParseError::Code::Syntax, line_no, "expected '<name> = <constructor> ...'");
      const std::string& name = tokens[0];
      if (!valid_name(name)) throw ParseError(ParseError::Code::Syntax, line_no, "bad point name '" + name + "'");
      if (ids.count(name)) throw ParseError(ParseError::Code::Syntax, line_no, "point '" + name + "' redefined");

      Construction c;
      c.out = static_cast<PointId>(p.names.size());
      const std::string& word = tokens[2];
      std::vector<std::string> args(tokens.begin() + 3, tokens.end());
      auto arity_error = [&](std::size_t want) {
        return ParseError(ParseError::Code::ArityMismatch, line_no,
                          "'" + word + "' takes " + std::to_string(want) + " arguments, got " +
                              std::to_string(args.size()));
      };

      if (word == "point") {
        if (args.size() != 2) throw arity_error(2);
        std::array<double, 2> xy{};
        for (int k = 0; k < 2; ++k) {
          const std::string& a = args[static_cast<std::size_t>(k)];
          auto res = std::from_chars(a.data(), a.data() + a.size(), xy[static_cast<std::size_t>(k)]);
          if (res.ec != std::errc() || res.ptr != a.data() + a.size())
            throw ParseError(ParseError::Code::Syntax, line_no, "bad coordinate '" + a + "'");
        }
        c.kind = ConstructionKind::FreePoint;
        c.pinned = xy;
      } else if (word == "intersect") {
        std::size_t i = 0;
        while (i < args.size()) {
          auto it = std::find_if(kObjects.begin(), kObjects.end(), [&](const auto& o) { return o.word == args[i]; });
          if (it == kObjects.end())
            throw ParseError(ParseError::Code::UnknownConstructor, line_no, "unknown object '" + args[i] + "'");
          if (i + 1 + it->points > args.size())
            throw ParseError(ParseError::Code::ArityMismatch, line_no,
                             "'" + args[i] + "' takes " + std::to_string(it->points) + " points");
          GeomObject o;
          o.kind = it->kind;
          for (std::size_t k = 0; k < it->points; ++k) o.pts[k] = resolve(args[i + 1 + k]);
          c.objects.push_back(o);
          i += 1 + it->points;
        }
        if (c.objects.size() != 2)
          throw ParseError(ParseError::Code::ArityMismatch, line_no, "'intersect' takes exactly two objects");
        c.kind = ConstructionKind::Intersect;
        for (const auto& o : c.objects)
          for (std::size_t k = 0; k < o.point_count(); ++k) c.in.push_back(o.pts[k]);
      } else {
        auto it = std::find_if(kCtors.begin(), kCtors.end(), [&](const auto& s) { return s.word == word; });
        if (it == kCtors.end())
          throw ParseError(ParseError::Code::UnknownConstructor, line_no, "unknown constructor '" + word + "'");
        if (args.size() != it->points) throw arity_error(it->points);
        c.kind = it->kind;
        for (const auto& a : args) c.in.push_back(resolve(a));
        GeomObject o;
        for (std::size_t k = 0; k < c.in.size() && k < 3; ++k) o.pts[k] = c.in[k];
        switch (c.kind) {
          case ConstructionKind::OnLine: o.kind = GeomObject::Kind::Line; c.objects.push_back(o); break;
          case ConstructionKind::OnCircle: o.kind = GeomObject::Kind::Circle; c.objects.push_back(o); break;
          case ConstructionKind::ParallelThrough: o.kind = GeomObject::Kind::PLine; c.objects.push_back(o); break;
          case ConstructionKind::PerpendicularThrough:
            o.kind = GeomObject::Kind::TLine;
            c.objects.push_back(o);
            break;
          default: break;
        }
      }
      c.implied = implied_statements(c);
      ids.emplace(name, c.out);
      p.names.push_back(name);
      p.constructions.push_back(std::move(c));
    }
    if (nl == text.size()) break;
  }
  if (!have_goal) throw ParseError(ParseError::Code::MissingGoal, line_no, "no '? goal' line");
  return p;
}

namespace {

std::string constructor_word(const Construction& c) {
  switch (c.kind) {
    case ConstructionKind::FreePoint: return c.pinned ? "point" : "free";
    case ConstructionKind::Intersect: return "intersect";
    default: break;
  }
  for (const auto& s : kCtors)
    if (s.kind == c.kind) return std::string(s.word);
  return "?";
}

std::vector<std::string> argument_words(const Problem& p, const Construction& c) {
  std::vector<std::string> out;
  if (c.kind == ConstructionKind::FreePoint) {
    if (c.pinned) {
      out.push_back(format_double((*c.pinned)[0]));
      out.push_back(format_double((*c.pinned)[1]));
    }
  } else if (c.kind == ConstructionKind::Intersect) {
    for (const auto& o : c.objects) {
      out.emplace_back(object_word(o.kind));
      for (std::size_t k = 0; k < o.point_count(); ++k) out.push_back(p.name(o.pts[k]));
    }
  } else {
    for (PointId q : c.in) out.push_back(p.name(q));
  }
  return out;
}

} // namespace

std::string serialize_problem(const Problem& p) {
  std::ostringstream os;
  for (const auto& c : p.constructions) {
    os << p.name(c.out) << " = " << constructor_word(c);
    for (const auto& w : argument_words(p, c)) os << ' ' << w;
    os << '\n';
  }
  os << "? " << format_statement(p.goal, p.namer()) << '\n';
  return os.str();
}

nlohmann::json problem_to_json(const Problem& p) {
  using nlohmann::json;
  json cs = json::array();
  for (const auto& c : p.constructions) {
    json jc;
    jc["point"] = p.name(c.out);
    jc["constructor"] = constructor_word(c);
    jc["args"] = argument_words(p, c);
    json implied = json::array();
    for (const auto& s : c.implied) implied.push_back(format_statement(s, p.namer()));
    jc["implied"] = implied;
    cs.push_back(jc);
  }
  return json{{"points", p.names}, {"constructions", cs}, {"goal", format_statement(p.goal, p.namer())}};
}

Problem problem_from_json(const nlohmann::json& j) {
  // The JSON form carries the same information as the text form; rebuild
  // the text and reuse the one parser so both stay in lock-step.
  std::ostringstream os;
  for (const auto& jc : j.at("constructions")) {
    os << jc.at("point").get<std::string>() << " = " << jc.at("constructor").get<std::string>();
    for (const auto& a : jc.at("args")) os << ' ' << a.get<std::string>();
    os << '\n';
  }
  os << "? " << j.at("goal").get<std::string>() << '\n';
  return parse_problem(os.str());
}

} // namespace geo
