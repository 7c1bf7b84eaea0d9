#include "geoprover/encoding.hpp"

#include <algorithm>
#include <optional>

namespace geo {

namespace {

struct SegTerm {
  long coef;
  PointId p, q;
};

Equation segments(Table t, std::initializer_list<SegTerm> terms) {
  Equation e(t);
  for (const SegTerm& s : terms) e.add(VarId::segment(t, s.p, s.q), s.coef);
  e.normalize();
  return e;
}

void push(std::vector<Encoding>& out, Table t, std::vector<Equation> eqs, bool provable = true) {
  std::erase_if(eqs, [](const Equation& e) { return e.is_zero(); });
  if (eqs.empty()) return;
  out.push_back(Encoding{t, std::move(eqs), provable});
}

// q as sum(e_p log p), or nullopt when q <= 0.
std::optional<Equation> log_of(const Rational& q) {
  if (q <= 0) return std::nullopt;
  Equation e(Table::LogLen);
  for (auto [prime, exp] : factorize(q)) e.add(VarId::log_const(prime), exp);
  return e;
}

bool only_segments(const Equation& e) {
  return std::all_of(e.terms().begin(), e.terms().end(),
                     [](const Term& t) { return t.var.kind == VarId::Kind::Segment; });
}

// c1 x + c2 y = 0 in Len (x, y lengths) or SqLen (squares): x/y is a
// positive constant, so log x - log y is a log-constant.
void transfer_from_two_terms(const Equation& e, std::vector<Encoding>& out) {
  if (e.terms().size() != 2 || e.constant() != 0 || !only_segments(e)) return;
  const Term& x = e.terms()[0];
  const Term& y = e.terms()[1];
  Rational ratio = -y.coef / x.coef;  // value(x) = ratio * value(y)
  auto lg = log_of(ratio);
  if (!lg) return;
  Rational per_unit = e.table() == Table::SqLen ? Rational(1, 2) : Rational(1);
  Equation le(Table::LogLen);
  le.add(VarId::segment(Table::LogLen, x.var.a, x.var.b), 1);
  le.add(VarId::segment(Table::LogLen, y.var.a, y.var.b), -1);
  le.add_scaled(*lg, -per_unit);
  le.normalize();
  push(out, Table::LogLen, {le});
  Table other = e.table() == Table::Len ? Table::SqLen : Table::Len;
  if (other == Table::SqLen) {
    Equation se(Table::SqLen);
    se.add(VarId::segment(Table::SqLen, x.var.a, x.var.b), 1);
    se.add(VarId::segment(Table::SqLen, y.var.a, y.var.b), -ratio * ratio);
    se.normalize();
    push(out, Table::SqLen, {se});
  } else {
    mpz_class num = ratio.get_num(), den = ratio.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
      Equation le2(Table::Len);
      le2.add(VarId::segment(Table::Len, x.var.a, x.var.b), 1);
      le2.add(VarId::segment(Table::Len, y.var.a, y.var.b), -Rational(sqrt(num), sqrt(den)));
      le2.normalize();
      push(out, Table::Len, {le2});
    }
  }
}

// c (log x - log y) + sum(e_p log p) = 0: x/y = prod p^(-e_p/c).
void transfer_from_log(const Equation& e, std::vector<Encoding>& out) {
  if (e.constant() != 0) return;
  std::vector<const Term*> segs;
  for (const Term& t : e.terms()) {
    if (t.var.kind == VarId::Kind::Sine) return;
    if (t.var.kind == VarId::Kind::Segment) segs.push_back(&t);
  }
  if (segs.size() != 2 || segs[0]->coef != -segs[1]->coef) return;
  const Rational c = segs[0]->coef;
  // ratio^2 = prod p^(-2 e_p / c) must be rational.
  Rational sq = 1;
  bool sq_rational = true;
  bool lin_rational = true;
  Rational lin = 1;
  for (const Term& t : e.terms()) {
    if (t.var.kind != VarId::Kind::LogConst) continue;
    Rational two_exp = -2 * t.coef / c;
    if (two_exp.get_den() != 1) {
      sq_rational = false;
      break;
    }
    long k = two_exp.get_num().get_si();
    mpz_class base = t.var.a;
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(std::abs(k)));
    sq *= k >= 0 ? Rational(pw) : Rational(1) / Rational(pw);
    if (k % 2 != 0) {
      lin_rational = false;
    } else {
      mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(std::abs(k / 2)));
      lin *= k >= 0 ? Rational(pw) : Rational(1) / Rational(pw);
    }
  }
  if (!sq_rational) return;
  const VarId& x = segs[0]->var;
  const VarId& y = segs[1]->var;
  Equation se(Table::SqLen);
  se.add(VarId::segment(Table::SqLen, x.a, x.b), 1);
  se.add(VarId::segment(Table::SqLen, y.a, y.b), -sq);
  se.normalize();
  push(out, Table::SqLen, {se});
  if (lin_rational) {
    Equation le(Table::Len);
    le.add(VarId::segment(Table::Len, x.a, x.b), 1);
    le.add(VarId::segment(Table::Len, y.a, y.b), -lin);
    le.normalize();
    push(out, Table::Len, {le});
  }
}

// Vertex of two lines that share exactly one endpoint.
std::optional<std::array<PointId, 3>> angle_at_shared_point(PointId a, PointId b, PointId c, PointId d) {
  if (a == b || c == d) return std::nullopt;
  if (a == c && b != d) return std::array<PointId, 3>{b, a, d};
  if (a == d && b != c) return std::array<PointId, 3>{b, a, c};
  if (b == c && a != d) return std::array<PointId, 3>{a, b, d};
  if (b == d && a != c) return std::array<PointId, 3>{a, b, c};
  return std::nullopt;
}

void sine_equalities(const Statement& s, std::vector<Encoding>& out) {
  auto a = s.args();
  // (0,1)~(2,3) is the statement itself; (0,2)~(1,3) is its alternation.
  const std::array<std::array<int, 4>, 2> pairings = {{{0, 1, 2, 3}, {0, 2, 1, 3}}};
  for (const auto& pr : pairings) {
    auto first = angle_at_shared_point(a[2 * pr[0]], a[2 * pr[0] + 1], a[2 * pr[1]], a[2 * pr[1] + 1]);
    auto second = angle_at_shared_point(a[2 * pr[2]], a[2 * pr[2] + 1], a[2 * pr[3]], a[2 * pr[3] + 1]);
    if (!first || !second) continue;
    Equation e(Table::LogLen);
    e.add(VarId::sine((*first)[0], (*first)[1], (*first)[2]), 1);
    e.add(VarId::sine((*second)[0], (*second)[1], (*second)[2]), -1);
    e.normalize();
    push(out, Table::LogLen, {e}, false);
  }
}

}  // namespace

bool uses_sines(const Equation& e) {
  return std::any_of(e.terms().begin(), e.terms().end(),
                     [](const Term& t) { return t.var.kind == VarId::Kind::Sine; });
}

std::vector<Encoding> encode(const Statement& s, const EncodingOptions& opts) {
  std::vector<Encoding> out;
  auto a = s.args();
  switch (s.kind()) {
    case Kind::Coll:
    case Kind::Cyclic:
    case Kind::Para:
      break;
    case Kind::EqAngle:
      if (opts.law_of_sines) sine_equalities(s, out);
      break;
    case Kind::Cong:
      for (Table t : {Table::Len, Table::LogLen, Table::SqLen})
        push(out, t, {segments(t, {{1, a[0], a[1]}, {-1, a[2], a[3]}})});
      break;
    case Kind::Perp:
      push(out, Table::SqLen,
           {segments(Table::SqLen, {{1, a[0], a[2]}, {1, a[1], a[3]}, {-1, a[0], a[3]}, {-1, a[1], a[2]}})});
      break;
    case Kind::Midpoint: {
      PointId m = a[0], p = a[1], q = a[2];
      push(out, Table::Len,
           {segments(Table::Len, {{1, p, m}, {-1, m, q}}), segments(Table::Len, {{1, p, q}, {-2, p, m}})});
      Equation half(Table::LogLen);
      half.add(VarId::segment(Table::LogLen, p, q), 1);
      half.add(VarId::segment(Table::LogLen, p, m), -1);
      half.add(VarId::log_const(2), -1);
      half.normalize();
      push(out, Table::LogLen, {segments(Table::LogLen, {{1, p, m}, {-1, m, q}}), half});
      push(out, Table::SqLen,
           {segments(Table::SqLen, {{1, p, m}, {-1, m, q}}), segments(Table::SqLen, {{1, p, q}, {-4, p, m}})});
      break;
    }
    case Kind::EqRatio:
      push(out, Table::LogLen,
           {segments(Table::LogLen, {{1, a[0], a[1]}, {-1, a[2], a[3]}, {-1, a[4], a[5]}, {1, a[6], a[7]}})});
      break;
    case Kind::AREq: {
      Equation e = s.equation()->normalized();
      if (uses_sines(e) && !opts.law_of_sines)
        throw ExtensionDisabled("statement uses sine variables but the law-of-sines extension is off");
      push(out, e.table(), {e});
      if (e.table() == Table::LogLen)
        transfer_from_log(e, out);
      else
        transfer_from_two_terms(e, out);
      break;
    }
  }
  return out;
}

std::vector<Equation> statement_to_equations(const Statement& s, const EncodingOptions& opts) {
  std::vector<Equation> out;
  for (Encoding& enc : encode(s, opts))
    for (Equation& e : enc.equations)
      if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(std::move(e));
  return out;
}

std::vector<Equation> law_of_sines_equations(std::array<PointId, 3> t, const EncodingOptions& opts) {
  if (!opts.law_of_sines) throw ExtensionDisabled("law-of-sines extension is off");
  auto [A, B, C] = t;
  auto side_minus_sine = [](PointId p, PointId q, PointId v, PointId opp1, PointId opp2) {
    Equation e(Table::LogLen);
    e.add(VarId::segment(Table::LogLen, p, q), 1);
    e.add(VarId::sine(opp1, v, opp2), -1);
    return e;
  };
  // |BC| / sin A, |CA| / sin B, |AB| / sin C
  Equation ra = side_minus_sine(B, C, A, B, C);
  Equation rb = side_minus_sine(C, A, B, C, A);
  Equation rc = side_minus_sine(A, B, C, A, B);
  Equation e1 = ra;
  e1.add_scaled(rb, -1);
  Equation e2 = rb;
  e2.add_scaled(rc, -1);
  e1.normalize();
  e2.normalize();
  return {e1, e2};
}

} // namespace geo
