#pragma once

// Naive reference implementations the fast paths are compared against.

#include "geoprover/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

namespace oracle {

using namespace geo;

inline Statement make(Kind k, std::initializer_list<PointId> args) {
  return canonical(Statement(k, std::span<const PointId>(args.begin(), args.size())));
}

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

inline bool shape_equal(const Coordinates& c, const std::array<PointId, 3>& t, const std::array<PointId, 3>& u,
                        double tol) {
  double r[3];
  for (int i = 0; i < 3; ++i) {
    Vec2 e1 = c[t[(i + 1) % 3]] - c[t[i]];
    Vec2 e2 = c[u[(i + 1) % 3]] - c[u[i]];
    r[i] = 0.5 * std::log(norm2(e1) / norm2(e2));
  }
  return std::abs(r[0] - r[1]) < tol && std::abs(r[1] - r[2]) < tol;
}

// Every tuple of every family's arity, tested one by one.
inline ConfigSet configurations(const Coordinates& c, double tol) {
  ConfigSet out;
  const auto n = static_cast<PointId>(c.size());
  std::vector<std::pair<PointId, PointId>> segs;
  for (PointId a = 0; a < n; ++a)
    for (PointId b = 0; b < n; ++b) {
      if (a < b) segs.emplace_back(a, b);
      for (PointId d = 0; d < n; ++d) {
        if (a == b || b == d || a == d) continue;
        Statement col = make(Kind::Coll, {a, b, d});
        if (numeric_holds(col, c, tol)) out.coll.push_back(col);
        Statement mid = make(Kind::Midpoint, {a, b, d});
        if (numeric_holds(mid, c, tol)) out.midpoint.push_back(mid);
        for (PointId e = 0; e < n; ++e) {
          if (e == a || e == b || e == d) continue;
          Statement cyc = make(Kind::Cyclic, {a, b, d, e});
          if (numeric_holds(cyc, c, tol)) out.cyclic.push_back(cyc);
        }
      }
    }
  for (const auto& s1 : segs)
    for (const auto& s2 : segs) {
      if (s1 == s2) continue;
      for (Kind k : {Kind::Para, Kind::Perp, Kind::Cong}) {
        Statement st = make(k, {s1.first, s1.second, s2.first, s2.second});
        if (numeric_holds(st, c, tol)) (k == Kind::Para ? out.para : k == Kind::Perp ? out.perp : out.cong).push_back(st);
      }
    }
  std::vector<std::array<PointId, 3>> triples;
  for (PointId a = 0; a < n; ++a)
    for (PointId b = 0; b < n; ++b)
      for (PointId d = 0; d < n; ++d)
        if (a != b && b != d && a != d) triples.push_back({a, b, d});
  for (const auto& x : triples)
    for (const auto& y : triples) {
      // x = (v, p, q): the angle at v from p to q.
      Statement st = make(Kind::EqAngle, {x[0], x[1], x[0], x[2], y[0], y[1], y[0], y[2]});
      if (numeric_holds(st, c, tol)) out.eqangle.push_back(st);
    }
  std::vector<SimilarPair> sim;
  for (const auto& t : triples) {
    if (numeric_holds(make(Kind::Coll, {t[0], t[1], t[2]}), c, tol)) continue;
    for (const auto& u : triples) {
      if (t == u || numeric_holds(make(Kind::Coll, {u[0], u[1], u[2]}), c, tol)) continue;
      if (!shape_equal(c, t, u, tol)) continue;
      bool o1 = cross(c[t[1]] - c[t[0]], c[t[2]] - c[t[0]]) > 0;
      bool o2 = cross(c[u[1]] - c[u[0]], c[u[2]] - c[u[0]]) > 0;
      sim.push_back(canonical_similar({t, u, o1 != o2}));
    }
  }
  out.similar = sim;
  for (PointId v = 0; v < n; ++v)
    for (const auto& t : triples) {
      PointId s1 = t[0], foot = t[1], s2 = t[2];
      if (v == s1 || v == foot || v == s2 || s1 > s2) continue;
      if (!numeric_holds(make(Kind::Coll, {s1, foot, s2}), c, tol)) continue;
      if (numeric_holds(make(Kind::EqAngle, {v, s1, v, foot, v, foot, v, s2}), c, tol))
        out.bisectors.push_back(AngleBisector{v, s1, s2, foot});
    }
  for (auto* f : {&out.coll, &out.cyclic, &out.para, &out.perp, &out.cong, &out.midpoint, &out.eqangle})
    sort_unique(*f);
  sort_unique(out.similar);
  sort_unique(out.bisectors);
  return out;
}

inline std::size_t max_variable(const Statement& pattern) {
  auto pts = points_of(pattern);
  return pts.empty() ? 0 : pts.back();
}

// Every binding of every rule, variable by variable; a hypothesis is tested
// as soon as its last variable is bound.
inline std::vector<RuleInstance> match(const std::vector<Rule>& catalog, const Coordinates& c, double tol) {
  std::vector<RuleInstance> out;
  const auto n = static_cast<PointId>(c.size());
  for (std::size_t r = 0; r < catalog.size(); ++r) {
    const Rule& rule = catalog[r];
    const std::size_t k = rule.variable_count();
    std::vector<std::vector<const Statement*>> due(k);
    for (const Statement& h : rule.hypotheses) due[max_variable(h)].push_back(&h);
    std::vector<PointId> bind(k, 0);
    auto rec = [&](auto&& self, std::size_t var) -> void {
      if (var == k) {
        auto inst = make_instance(catalog, r, bind);
        if (inst && numeric_holds(inst->conclusion, c, tol)) out.push_back(std::move(*inst));
        return;
      }
      for (PointId p = 0; p < n; ++p) {
        bind[var] = p;
        bool ok = true;
        for (const Statement* h : due[var])
          if (!nondegenerate_instance(*h, bind) || !numeric_holds(instantiate(*h, bind), c, tol)) {
            ok = false;
            break;
          }
        if (ok) self(self, var + 1);
      }
    };
    rec(rec, 0);
  }
  sort_and_dedup(out);
  return out;
}

// Gauss-Jordan over the whole system at once, pivoting on the smallest
// remaining variable. Returns nullopt when the system is inconsistent.
inline std::optional<std::vector<Equation>> batch_rref(const std::vector<Equation>& input) {
  std::vector<Equation> rows;
  for (const Equation& e : input)
    if (!e.is_zero()) rows.push_back(e);
  std::vector<VarId> vars;
  for (const Equation& e : rows)
    for (const Term& t : e.terms()) vars.push_back(t.var);
  sort_unique(vars);
  std::vector<Equation> done;
  for (const VarId& v : vars) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const Equation& e) { return e.find(v) != nullptr; });
    if (it == rows.end()) continue;
    Equation piv = *it;
    rows.erase(it);
    Rational pc = piv.coefficient(v);
    for (Equation& e : rows) {
      Rational f = e.coefficient(v);
      if (f != 0) e.add_scaled(piv, -f / pc);
    }
    for (Equation& e : done) {
      Rational f = e.coefficient(v);
      if (f != 0) e.add_scaled(piv, -f / pc);
    }
    done.push_back(piv);
  }
  for (const Equation& e : rows)
    if (!e.is_zero()) return std::nullopt;
  for (Equation& e : done) e.normalize();
  std::sort(done.begin(), done.end(),
            [](const Equation& a, const Equation& b) { return a.terms().front().var < b.terms().front().var; });
  return done;
}

// Random consistent system over a table: a hidden rational solution fixes
// every constant.
struct RandomSystem {
  std::vector<Equation> equations;
};

inline std::vector<VarId> variable_pool(Table t, std::size_t count, std::mt19937_64& rng) {
  std::vector<VarId> pool;
  for (PointId a = 0; a < 12 && pool.size() < 200; ++a)
    for (PointId b = a + 1; b < 12; ++b) pool.push_back(VarId::segment(t, a, b));
  if (t == Table::LogLen) {
    for (PointId v = 0; v < 4; ++v) pool.push_back(VarId::sine(4, v, 5));
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) pool.push_back(VarId::log_const(p));
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(std::min(count, pool.size()));
  return pool;
}

inline Rational random_rational(std::mt19937_64& rng, long bound = 1000) {
  std::uniform_int_distribution<long> num(-bound, bound), den(1, bound);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline RandomSystem random_system(Table t, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> nvars(1, 30), neqs(1, 40);
  auto vars = variable_pool(t, nvars(rng), rng);
  std::vector<Rational> value;
  for (std::size_t i = 0; i < vars.size(); ++i) value.push_back(random_rational(rng));
  RandomSystem sys;
  const std::size_t m = neqs(rng);
  std::uniform_int_distribution<std::size_t> width(1, std::min<std::size_t>(vars.size(), 5));
  std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
  for (std::size_t i = 0; i < m; ++i) {
    Equation e(t);
    std::size_t w = width(rng);
    for (std::size_t j = 0; j < w; ++j) {
      std::size_t v = pick(rng);
      Rational coef = random_rational(rng);
      if (coef == 0) coef = 1;
      e.add(vars[v], coef);
    }
    // Mix in an earlier equation now and then so the system has dependencies.
    if (!sys.equations.empty() && rng() % 3 == 0) {
      const Equation& prev = sys.equations[rng() % sys.equations.size()];
      Rational f = random_rational(rng, 10);
      e.add_scaled(prev, f);
    }
    // Recompute the constant from the hidden solution.
    Equation fixed(t);
    Rational total = 0;
    for (const Term& term : e.terms()) {
      fixed.add(term.var, term.coef);
      auto it = std::find(vars.begin(), vars.end(), term.var);
      total += term.coef * value[static_cast<std::size_t>(it - vars.begin())];
    }
    fixed.add_constant(-total);
    sys.equations.push_back(fixed);
  }
  return sys;
}

}  // namespace oracle
