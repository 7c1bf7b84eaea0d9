#include "geoprover/ar_table.hpp"

#include <algorithm>
#include <stdexcept>

namespace geo {

void Combination::add_scaled(const Combination& other, const Rational& factor) {
  if (factor == 0) return;
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + other.entries_.size());
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      merged.push_back(std::move(*a++));
    } else if (a == entries_.end() || b->first < a->first) {
      merged.emplace_back(b->first, b->second * factor);
      ++b;
    } else {
      Rational c = a->second + b->second * factor;
      if (c != 0) merged.emplace_back(a->first, std::move(c));
      ++a;
      ++b;
    }
  }
  entries_ = std::move(merged);
}

void Combination::scale(const Rational& factor) {
  if (factor == 0) {
    entries_.clear();
    return;
  }
  for (auto& e : entries_) e.second *= factor;
}

void Combination::add(EquationId id, const Rational& coef) {
  Combination single;
  single.entries_.emplace_back(id, coef);
  add_scaled(single, 1);
}

bool replay_certificate(const Certificate& cert, const std::function<const Equation*(EquationId)>& lookup) {
  Equation sum(cert.target.table());
  for (const auto& [id, coef] : cert.combination.entries()) {
    const Equation* e = lookup(id);
    if (!e || e->table() != sum.table()) return false;
    sum.add_scaled(*e, coef);
  }
  return sum == cert.target;
}

void ARTable::reduce(Equation& r, Combination& sub, std::size_t first_row) {
  std::vector<VarId> vars;
  vars.reserve(r.terms().size());
  for (const Term& t : r.terms()) vars.push_back(t.var);
  for (const VarId& v : vars) {
    auto it = pivot_row_.find(v);
    if (it == pivot_row_.end() || it->second < first_row) continue;
    const Rational coef = r.coefficient(v);
    if (coef == 0) continue;
    const Row& row = rows_[it->second];
    Rational f = coef / row.eq.terms().front().coef;
    r.add_scaled(row.eq, -f);
    sub.add_scaled(row.provenance, f);
    ++counters_.row_applications;
  }
}

ARTable::InsertReport ARTable::insert(const Equation& e, EquationId origin) {
  if (e.table() != table_) throw std::invalid_argument("equation inserted into the wrong AR table");
  ++counters_.inserts;
  Equation r = e;
  Combination sub;
  reduce(r, sub, 0);
  // r == e - sum(sub), i.e. r is the combination unit(origin) - sub.
  Combination prov = Combination::unit(origin);
  prov.add_scaled(sub, -1);
  if (r.empty()) {
    if (r.constant() == 0) return {Outcome::Redundant, std::nullopt};
    return {Outcome::Inconsistent, Certificate{r, prov}};
  }
  Rational k = r.normalize();
  prov.scale(k);
  const VarId pivot = r.terms().front().var;
  const Rational& pc = r.terms().front().coef;
  for (Row& row : rows_) {
    const Term* t = row.eq.find(pivot);
    if (!t) continue;
    Rational f = t->coef / pc;
    row.eq.add_scaled(r, -f);
    row.provenance.add_scaled(prov, -f);
    Rational k2 = row.eq.normalize();
    row.provenance.scale(k2);
  }
  pivot_row_.emplace(pivot, rows_.size());
  rows_.push_back(Row{std::move(r), std::move(prov)});
  return {Outcome::NewRow, std::nullopt};
}

PendingQuery& ARTable::pending(const Equation& target) {
  if (target.table() != table_) throw std::invalid_argument("query against the wrong AR table");
  Equation key = target.normalized();
  auto it = pending_.find(key);
  if (it != pending_.end()) return it->second;
  PendingQuery q;
  q.target = key;
  q.residual = key;
  return pending_.emplace(key, std::move(q)).first->second;
}

std::optional<Certificate> ARTable::advance(PendingQuery& q) {
  if (q.proven) return Certificate{q.target, q.subtracted};
  ++counters_.queries;
  if (!resume_) {
    q.residual = q.target;
    q.subtracted = Combination();
    q.watermark = 0;
  } else if (q.watermark > 0) {
    ++counters_.resumed;
  }
  reduce(q.residual, q.subtracted, q.watermark);
  q.watermark = rows_.size();
  if (q.residual.is_zero()) {
    q.proven = true;
    return Certificate{q.target, q.subtracted};
  }
  return std::nullopt;
}

std::vector<Equation> ARTable::echelon() const {
  std::vector<Equation> out;
  out.reserve(rows_.size());
  for (const auto& [pivot, idx] : pivot_row_) out.push_back(rows_[idx].eq);
  return out;
}

} // namespace geo
