#include "geoprover/statement.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace geo {

std::size_t arity(Kind k) {
  switch (k) {
    case Kind::Coll: return 3;
    case Kind::Cyclic: return 4;
    case Kind::Para: return 4;
    case Kind::Perp: return 4;
    case Kind::Cong: return 4;
    case Kind::EqAngle: return 8;
    case Kind::EqRatio: return 8;
    case Kind::Midpoint: return 3;
    case Kind::AREq: return 0;
  }
  return 0;
}

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::Coll: return "coll";
    case Kind::Cyclic: return "cyclic";
    case Kind::Para: return "para";
    case Kind::Perp: return "perp";
    case Kind::Cong: return "cong";
    case Kind::EqAngle: return "eqangle";
    case Kind::EqRatio: return "eqratio";
    case Kind::Midpoint: return "midpoint";
    case Kind::AREq: return "eq";
  }
  return "?";
}

std::optional<Kind> parse_kind(std::string_view name) {
  for (Kind k : kAllKinds)
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

Statement::Statement(Kind kind, std::span<const PointId> args) : kind_(kind) {
  if (kind == Kind::AREq) throw std::invalid_argument("AREq statements need an equation");
  if (args.size() != arity(kind)) throw std::invalid_argument("statement arity mismatch");
  std::copy(args.begin(), args.end(), args_.begin());
}

Statement::Statement(Equation eq) : kind_(Kind::AREq), equation_(std::move(eq)) {}

std::strong_ordering Statement::operator<=>(const Statement& o) const {
  if (auto c = kind_ <=> o.kind_; c != 0) return c;
  if (auto c = args_ <=> o.args_; c != 0) return c;
  if (equation_.has_value() != o.equation_.has_value())
    return equation_.has_value() ? std::strong_ordering::greater : std::strong_ordering::less;
  if (equation_) return *equation_ <=> *o.equation_;
  return std::strong_ordering::equal;
}

std::size_t Statement::hash() const {
  std::size_t h = static_cast<std::size_t>(kind_) * 0x9e3779b97f4a7c15ULL;
  for (std::size_t i = 0; i < arity(kind_); ++i) h = (h ^ args_[i]) * 0x100000001b3ULL;
  if (equation_) h ^= equation_->hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

namespace {

using Perm = std::array<std::uint8_t, 8>;

std::vector<Perm> all_permutations(std::size_t n) {
  Perm p{0, 1, 2, 3, 4, 5, 6, 7};
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.begin() + static_cast<long>(n)));
  return out;
}

// Pairs of arguments (p0 p1)(p2 p3)... each an undirected line or segment.
// `slot_orders` lists admissible arrangements of the pairs.
std::vector<Perm> paired_group(std::size_t pairs, const std::vector<std::array<std::uint8_t, 4>>& slot_orders) {
  std::vector<Perm> out;
  for (const auto& order : slot_orders) {
    for (unsigned flips = 0; flips < (1u << pairs); ++flips) {
      Perm p{0, 1, 2, 3, 4, 5, 6, 7};
      for (std::size_t slot = 0; slot < pairs; ++slot) {
        std::uint8_t src = order[slot];
        bool flip = (flips >> slot) & 1u;
        p[2 * slot] = static_cast<std::uint8_t>(2 * src + (flip ? 1 : 0));
        p[2 * slot + 1] = static_cast<std::uint8_t>(2 * src + (flip ? 0 : 1));
      }
      out.push_back(p);
    }
  }
  return out;
}

std::vector<Perm> build_group(Kind k) {
  switch (k) {
    case Kind::Coll: return all_permutations(3);
    case Kind::Cyclic: return all_permutations(4);
    case Kind::Para:
    case Kind::Perp:
    case Kind::Cong: return paired_group(2, {{0, 1, 0, 0}, {1, 0, 0, 0}});
    case Kind::EqAngle:
    case Kind::EqRatio:
      // l0 - l1 - l2 + l3 = 0 is preserved (up to sign) exactly when the
      // {l0,l3} and {l1,l2} pairs stay on the diagonals.
      return paired_group(4, {{0, 1, 2, 3}, {0, 2, 1, 3}, {3, 1, 2, 0}, {3, 2, 1, 0},
                              {1, 0, 3, 2}, {1, 3, 0, 2}, {2, 0, 3, 1}, {2, 3, 0, 1}});
    case Kind::Midpoint: return {Perm{0, 1, 2, 3, 4, 5, 6, 7}, Perm{0, 2, 1, 3, 4, 5, 6, 7}};
    case Kind::AREq: return {Perm{0, 1, 2, 3, 4, 5, 6, 7}};
  }
  return {};
}

} // namespace

const std::vector<std::array<std::uint8_t, 8>>& symmetry_group(Kind k) {
  static const std::array<std::vector<Perm>, 9> groups = [] {
    std::array<std::vector<Perm>, 9> g;
    for (Kind kind : kAllKinds) g[static_cast<std::size_t>(kind)] = build_group(kind);
    return g;
  }();
  return groups[static_cast<std::size_t>(k)];
}

Statement canonical(const Statement& s) {
  if (s.kind() == Kind::AREq) {
    if (!s.equation()) throw std::invalid_argument("AREq statement without payload");
    return Statement(s.equation()->normalized());
  }
  auto args = s.args();
  std::array<PointId, 8> a{};
  std::copy(args.begin(), args.end(), a.begin());
  auto sort_pair = [&](std::size_t i) {
    if (a[i] > a[i + 1]) std::swap(a[i], a[i + 1]);
  };
  switch (s.kind()) {
    case Kind::Coll:
    case Kind::Cyclic: std::sort(a.begin(), a.begin() + static_cast<long>(args.size())); break;
    case Kind::Para:
    case Kind::Perp:
    case Kind::Cong: {
      sort_pair(0);
      sort_pair(2);
      if (std::pair(a[2], a[3]) < std::pair(a[0], a[1])) {
        std::swap(a[0], a[2]);
        std::swap(a[1], a[3]);
      }
      break;
    }
    case Kind::EqAngle:
    case Kind::EqRatio: {
      for (std::size_t i = 0; i < 8; i += 2) sort_pair(i);
      static const std::array<std::array<std::uint8_t, 4>, 8> orders = {{{0, 1, 2, 3},
                                                                          {0, 2, 1, 3},
                                                                          {3, 1, 2, 0},
                                                                          {3, 2, 1, 0},
                                                                          {1, 0, 3, 2},
                                                                          {1, 3, 0, 2},
                                                                          {2, 0, 3, 1},
                                                                          {2, 3, 0, 1}}};
      std::array<PointId, 8> best = a;
      for (const auto& order : orders) {
        std::array<PointId, 8> cand{};
        for (std::size_t slot = 0; slot < 4; ++slot) {
          cand[2 * slot] = a[2 * order[slot]];
          cand[2 * slot + 1] = a[2 * order[slot] + 1];
        }
        if (cand < best) best = cand;
      }
      a = best;
      break;
    }
    case Kind::Midpoint: sort_pair(1); break;
    case Kind::AREq: break;
  }
  return Statement(s.kind(), std::span<const PointId>(a.data(), args.size()));
}

std::vector<PointId> points_of(const Statement& s) {
  std::vector<PointId> out(s.args().begin(), s.args().end());
  if (s.equation()) {
    for (const Term& t : s.equation()->terms()) {
      switch (t.var.kind) {
        case VarId::Kind::Segment:
          out.push_back(static_cast<PointId>(t.var.a));
          out.push_back(static_cast<PointId>(t.var.b));
          break;
        case VarId::Kind::Sine:
          out.push_back(static_cast<PointId>(t.var.a));
          out.push_back(static_cast<PointId>(t.var.b));
          out.push_back(static_cast<PointId>(t.var.c));
          break;
        case VarId::Kind::LogConst: break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string format_equation(const Equation& e, const PointNamer& name) {
  std::ostringstream os;
  os << "eq " << table_name(e.table());
  for (const Term& t : e.terms()) {
    os << ' ' << to_string(t.coef) << ' ';
    switch (t.var.kind) {
      case VarId::Kind::Segment:
        os << name(static_cast<PointId>(t.var.a)) << ' ' << name(static_cast<PointId>(t.var.b));
        break;
      case VarId::Kind::Sine:
        os << "sin " << name(static_cast<PointId>(t.var.a)) << ' '
           << name(static_cast<PointId>(t.var.b)) << ' ' << name(static_cast<PointId>(t.var.c));
        break;
      case VarId::Kind::LogConst: os << "log " << t.var.a; break;
    }
  }
  os << " = " << to_string(Rational(-e.constant()));
  return os.str();
}

std::string format_statement(const Statement& s, const PointNamer& name) {
  if (s.kind() == Kind::AREq) return format_equation(*s.equation(), name);
  std::string out(kind_name(s.kind()));
  for (PointId p : s.args()) {
    out += ' ';
    out += name(p);
  }
  return out;
}

namespace {

Equation parse_equation(std::span<const std::string> tokens, const PointResolver& resolve) {
  if (tokens.size() < 3) throw std::invalid_argument("equation needs a table and '= constant'");
  Equation eq(parse_table(tokens[0]));
  std::size_t i = 1;
  auto need = [&](std::size_t n) {
    if (i + n > tokens.size()) throw std::invalid_argument("truncated equation term");
  };
  while (i < tokens.size() && tokens[i] != "=") {
    Rational coef = parse_rational(tokens[i++]);
    need(1);
    if (tokens[i] == "sin") {
      if (eq.table() != Table::LogLen) throw std::invalid_argument("sine terms only live in loglen");
      need(4);
      eq.add(VarId::sine(resolve(tokens[i + 1]), resolve(tokens[i + 2]), resolve(tokens[i + 3])), coef);
      i += 4;
    } else if (tokens[i] == "log") {
      if (eq.table() != Table::LogLen) throw std::invalid_argument("log constants only live in loglen");
      need(2);
      Rational p = parse_rational(tokens[i + 1]);
      if (p.get_den() != 1 || p < 2 || !p.get_num().fits_ulong_p() ||
          mpz_probab_prime_p(p.get_num_mpz_t(), 30) == 0 || p.get_num().get_ui() > 0xffffffffUL)
        throw std::invalid_argument("log constant must be a 32-bit prime: " + tokens[i + 1]);
      eq.add(VarId::log_const(static_cast<std::uint32_t>(p.get_num().get_ui())), coef);
      i += 2;
    } else {
      need(2);
      eq.add(VarId::segment(eq.table(), resolve(tokens[i]), resolve(tokens[i + 1])), coef);
      i += 2;
    }
  }
  if (i + 2 != tokens.size()) throw std::invalid_argument("equation must end with '= constant'");
  eq.add_constant(-parse_rational(tokens[i + 1]));
  return eq;
}

} // namespace

Statement parse_statement(std::span<const std::string> tokens, const PointResolver& resolve) {
  if (tokens.empty()) throw std::invalid_argument("empty predicate");
  auto kind = parse_kind(tokens[0]);
  if (!kind) throw std::invalid_argument("unknown predicate '" + tokens[0] + "'");
  if (*kind == Kind::AREq) return Statement(parse_equation(tokens.subspan(1), resolve));
  if (tokens.size() - 1 != arity(*kind))
    throw std::invalid_argument("predicate '" + tokens[0] + "' takes " + std::to_string(arity(*kind)) +
                                " points, got " + std::to_string(tokens.size() - 1));
  std::array<PointId, 8> args{};
  for (std::size_t i = 1; i < tokens.size(); ++i) args[i - 1] = resolve(tokens[i]);
  return Statement(*kind, std::span<const PointId>(args.data(), tokens.size() - 1));
}

} // namespace geo
