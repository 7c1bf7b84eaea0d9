#include "geoprover/equation.hpp"

#include <algorithm>
#include <stdexcept>

namespace geo {

std::string_view table_name(Table t) {
  switch (t) {
    case Table::Len: return "len";
    case Table::LogLen: return "loglen";
    case Table::SqLen: return "sqlen";
  }
  return "?";
}

Table parse_table(std::string_view name) {
  if (name == "len") return Table::Len;
  if (name == "loglen") return Table::LogLen;
  if (name == "sqlen") return Table::SqLen;
  throw std::invalid_argument("unknown AR table '" + std::string(name) + "'");
}

VarId VarId::segment(Table t, PointId p, PointId q) {
  if (p > q) std::swap(p, q);
  return VarId{t, Kind::Segment, p, q, 0};
}

VarId VarId::sine(PointId p, PointId vertex, PointId q) {
  if (p > q) std::swap(p, q);
  return VarId{Table::LogLen, Kind::Sine, p, vertex, q};
}

VarId VarId::log_const(std::uint32_t prime) {
  return VarId{Table::LogLen, Kind::LogConst, prime, 0, 0};
}

Equation& Equation::add(const VarId& var, const Rational& coef) {
  if (var.table != table_)
    throw std::invalid_argument("variable table does not match equation table");
  if (var.degenerate() || coef == 0) return *this;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), var,
                             [](const Term& t, const VarId& v) { return t.var < v; });
  if (it != terms_.end() && it->var == var) {
    it->coef += coef;
    if (it->coef == 0) terms_.erase(it);
  } else {
    terms_.insert(it, Term{var, coef});
  }
  return *this;
}

Equation& Equation::add_constant(const Rational& c) {
  constant_ += c;
  return *this;
}

Equation& Equation::add_scaled(const Equation& other, const Rational& factor) {
  if (other.table_ != table_)
    throw std::invalid_argument("cannot combine equations from different tables");
  if (factor == 0) return *this;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->var < b->var)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->var < a->var) {
      merged.push_back(Term{b->var, b->coef * factor});
      ++b;
    } else {
      Rational c = a->coef + b->coef * factor;
      if (c != 0) merged.push_back(Term{a->var, std::move(c)});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  constant_ += other.constant_ * factor;
  return *this;
}

const Term* Equation::find(const VarId& var) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), var,
                             [](const Term& t, const VarId& v) { return t.var < v; });
  if (it != terms_.end() && it->var == var) return &*it;
  return nullptr;
}

Rational Equation::coefficient(const VarId& var) const {
  const Term* t = find(var);
  return t ? t->coef : Rational(0);
}

Rational Equation::normalize() {
  if (terms_.empty()) {
    if (constant_ == 0) return Rational(1);
    Rational f = 1 / abs(constant_);
    constant_ = constant_ > 0 ? 1 : -1;
    return f;
  }
  Integer den_lcm = 1;
  auto fold_den = [&](const Rational& q) { mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den_mpz_t()); };
  for (const Term& t : terms_) fold_den(t.coef);
  fold_den(constant_);
  Integer num_gcd = 0;
  auto fold_num = [&](const Rational& q) {
    Integer scaled = q.get_num() * (den_lcm / q.get_den());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
  };
  for (const Term& t : terms_) fold_num(t.coef);
  fold_num(constant_);
  Rational factor(den_lcm, num_gcd);
  factor.canonicalize();
  if (terms_.front().coef < 0) factor = -factor;
  if (factor == 1) return factor;
  for (Term& t : terms_) t.coef *= factor;
  constant_ *= factor;
  return factor;
}

std::strong_ordering Equation::operator<=>(const Equation& o) const {
  if (auto c = table_ <=> o.table_; c != 0) return c;
  std::size_t n = std::min(terms_.size(), o.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = terms_[i].var <=> o.terms_[i].var; c != 0) return c;
    int cc = cmp(terms_[i].coef, o.terms_[i].coef);
    if (cc != 0) return cc < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (auto c = terms_.size() <=> o.terms_.size(); c != 0) return c;
  int cc = cmp(constant_, o.constant_);
  if (cc != 0) return cc < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

namespace {

std::size_t hash_mpz(mpz_srcptr z) {
  std::size_t h = static_cast<std::size_t>(mpz_sgn(z)) * 0x9e3779b97f4a7c15ULL;
  std::size_t limbs = mpz_size(z);
  for (std::size_t i = 0; i < limbs && i < 4; ++i)
    h = (h ^ static_cast<std::size_t>(mpz_getlimbn(z, i))) * 0x100000001b3ULL;
  return h ^ limbs;
}

inline void mix(std::size_t& h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

} // namespace

std::size_t hash_rational(const Rational& q) {
  std::size_t h = hash_mpz(q.get_num_mpz_t());
  mix(h, hash_mpz(q.get_den_mpz_t()));
  return h;
}

std::size_t Equation::hash() const {
  std::size_t h = static_cast<std::size_t>(table_);
  for (const Term& t : terms_) {
    mix(h, (static_cast<std::size_t>(t.var.kind) << 56) ^ (std::size_t{t.var.a} << 32) ^
               (std::size_t{t.var.b} << 16) ^ t.var.c);
    mix(h, hash_rational(t.coef));
  }
  mix(h, hash_rational(constant_));
  return h;
}

std::vector<std::pair<std::uint32_t, long>> factorize(const Rational& q) {
  if (q <= 0) throw std::domain_error("factorize: non-positive rational");
  std::vector<std::pair<std::uint32_t, long>> out;
  auto accumulate = [&](Integer n, long sign) {
    for (std::uint32_t p = 2; n > 1; ++p) {
      if (Integer(p) * p > n) {
        if (!n.fits_ulong_p() || n.get_ui() > 0xffffffffUL)
          throw std::domain_error("factorize: prime factor too large");
        out.emplace_back(static_cast<std::uint32_t>(n.get_ui()), sign);
        break;
      }
      long e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        n /= p;
        ++e;
      }
      if (e) out.emplace_back(p, sign * e);
      if (p > 1000000) throw std::domain_error("factorize: operand too large");
    }
  };
  accumulate(q.get_num(), 1);
  accumulate(q.get_den(), -1);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace geo
