#include "geoprover/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace geo {

namespace {

constexpr double kPi = std::numbers::pi;

Statement make(Kind k, std::initializer_list<PointId> args) {
  return canonical(Statement(k, std::span<const PointId>(args.begin(), args.size())));
}

void sort_unique(std::vector<Statement>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

double direction(Vec2 a, Vec2 b) {
  double t = std::atan2(b.y - a.y, b.x - a.x);
  if (t < 0) t += kPi;
  if (t >= kPi) t -= kPi;
  return t;
}

// Items sorted by a scalar key; reports every index whose key lies within
// `width` of `centre`, optionally on a circle of circumference `period`.
class SortedKeys {
public:
  explicit SortedKeys(std::vector<std::pair<double, std::size_t>> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
  }

  template <class F>
  void visit(double centre, double width, double period, F&& f) const {
    if (period > 0 && 2 * width >= period) {
      for (const auto& it : items_) f(it.second);
      return;
    }
    auto scan = [&](double lo, double hi) {
      auto first = std::lower_bound(items_.begin(), items_.end(), std::pair{lo, std::size_t{0}});
      for (auto it = first; it != items_.end() && it->first <= hi; ++it) f(it->second);
    };
    double lo = centre - width, hi = centre + width;
    if (period <= 0) {
      scan(lo, hi);
      return;
    }
    if (lo < 0) {
      scan(0, hi);
      scan(lo + period, period);
    } else if (hi >= period) {
      scan(lo, period);
      scan(0, hi - period);
    } else {
      scan(lo, hi);
    }
  }

private:
  std::vector<std::pair<double, std::size_t>> items_;
};

struct Segment {
  PointId a, b;
};

} // namespace

bool nondegenerate_triangle(const Coordinates& c, PointId a, PointId b, PointId cc, double tol) {
  return !numeric_holds(make(Kind::Coll, {a, b, cc}), c, tol);
}

bool similar_triangles(const Coordinates& c, const std::array<PointId, 3>& t1, const std::array<PointId, 3>& t2,
                       double tol) {
  std::array<double, 3> r{};
  for (std::size_t i = 0; i < 3; ++i) {
    double l1 = norm(c[t1[i]] - c[t1[(i + 1) % 3]]);
    double l2 = norm(c[t2[i]] - c[t2[(i + 1) % 3]]);
    if (l1 <= 0 || l2 <= 0) return false;
    r[i] = std::log(l1) - std::log(l2);
  }
  return std::abs(r[0] - r[1]) < tol && std::abs(r[1] - r[2]) < tol;
}

SimilarPair canonical_similar(const SimilarPair& s) {
  static constexpr std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  SimilarPair best = s;
  bool first = true;
  for (int swap = 0; swap < 2; ++swap) {
    const auto& x = swap ? s.second : s.first;
    const auto& y = swap ? s.first : s.second;
    for (const auto& p : perms) {
      SimilarPair cand;
      for (std::size_t i = 0; i < 3; ++i) {
        cand.first[i] = x[static_cast<std::size_t>(p[i])];
        cand.second[i] = y[static_cast<std::size_t>(p[i])];
      }
      cand.reflected = s.reflected;
      if (first || cand < best) best = cand;
      first = false;
    }
  }
  return best;
}

AngleBisector canonical_bisector(const AngleBisector& b) {
  AngleBisector out = b;
  if (out.side1 > out.side2) std::swap(out.side1, out.side2);
  return out;
}

const std::vector<Statement>* ConfigSet::family(Kind k) const {
  switch (k) {
    case Kind::Coll: return &coll;
    case Kind::Cyclic: return &cyclic;
    case Kind::Para: return &para;
    case Kind::Perp: return &perp;
    case Kind::Cong: return &cong;
    case Kind::Midpoint: return &midpoint;
    case Kind::EqAngle: return &eqangle;
    default: return nullptr;
  }
}

ConfigSet detect_configurations(const Coordinates& c, double tol) {
  ConfigSet cfg;
  const auto n = static_cast<PointId>(c.size());
  const double s2 = c.scale() * c.scale();

  // Small-arity families: direct enumeration is already cheap.
  for (PointId a = 0; a < n; ++a)
    for (PointId b = a + 1; b < n; ++b)
      for (PointId d = b + 1; d < n; ++d) {
        Statement coll = make(Kind::Coll, {a, b, d});
        if (numeric_holds(coll, c, tol)) cfg.coll.push_back(coll);
        for (PointId e = d + 1; e < n; ++e) {
          Statement cyc = make(Kind::Cyclic, {a, b, d, e});
          if (numeric_holds(cyc, c, tol)) cfg.cyclic.push_back(cyc);
        }
      }
  for (PointId m = 0; m < n; ++m)
    for (PointId a = 0; a < n; ++a)
      for (PointId b = a + 1; b < n; ++b) {
        if (m == a || m == b) continue;
        Statement mid = make(Kind::Midpoint, {m, a, b});
        if (numeric_holds(mid, c, tol)) cfg.midpoint.push_back(mid);
      }

  // Segment families through sorted direction / length keys.
  std::vector<Segment> segs;
  double min_len = std::numeric_limits<double>::infinity();
  for (PointId a = 0; a < n; ++a)
    for (PointId b = a + 1; b < n; ++b) {
      segs.push_back({a, b});
      min_len = std::min(min_len, norm(c[a] - c[b]));
    }
  if (!segs.empty()) {
    std::vector<std::pair<double, std::size_t>> dir_keys, len_keys;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      dir_keys.emplace_back(direction(c[segs[i].a], c[segs[i].b]), i);
      len_keys.emplace_back(norm2(c[segs[i].a] - c[segs[i].b]), i);
    }
    SortedKeys by_dir(dir_keys), by_len(len_keys);
    // |cross| = |u||v| sin(angle): the widest angular window any pair needs.
    double ratio = min_len > 0 ? tol * s2 / (min_len * min_len) : 1.0;
    double ang_width = ratio >= 1 ? kPi : std::asin(ratio) * 1.01 + 1e-12;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const auto [a, b] = segs[i];
      double th = dir_keys[i].first;
      by_dir.visit(th, ang_width, kPi, [&](std::size_t j) {
        if (j <= i) return;
        Statement st = make(Kind::Para, {a, b, segs[j].a, segs[j].b});
        if (numeric_holds(st, c, tol)) cfg.para.push_back(st);
      });
      double normal = th + kPi / 2;
      if (normal >= kPi) normal -= kPi;
      by_dir.visit(normal, ang_width, kPi, [&](std::size_t j) {
        if (j == i) return;
        Statement st = make(Kind::Perp, {a, b, segs[j].a, segs[j].b});
        if (numeric_holds(st, c, tol)) cfg.perp.push_back(st);
      });
      by_len.visit(len_keys[i].first, tol * s2 * 1.01 + 1e-300, 0, [&](std::size_t j) {
        if (j <= i) return;
        Statement st = make(Kind::Cong, {a, b, segs[j].a, segs[j].b});
        if (numeric_holds(st, c, tol)) cfg.cong.push_back(st);
      });
    }
  }

  // Vertex angles (v; p, q): directed angle from line vp to line vq.
  struct VertexAngle {
    PointId v, p, q;
  };
  std::vector<VertexAngle> angles;
  std::vector<std::pair<double, std::size_t>> angle_keys;
  for (PointId v = 0; v < n; ++v)
    for (PointId p = 0; p < n; ++p)
      for (PointId q = 0; q < n; ++q) {
        if (v == p || v == q || p == q) continue;
        double th = direction(c[v], c[q]) - direction(c[v], c[p]);
        if (th < 0) th += kPi;
        angle_keys.emplace_back(th, angles.size());
        angles.push_back({v, p, q});
      }
  SortedKeys by_angle(angle_keys);
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const auto& x = angles[i];
    by_angle.visit(angle_keys[i].first, tol * 1.01 + 1e-12, kPi, [&](std::size_t j) {
      if (j < i) return;
      const auto& y = angles[j];
      Statement st = make(Kind::EqAngle, {x.v, x.p, x.v, x.q, y.v, y.p, y.v, y.q});
      if (numeric_holds(st, c, tol)) cfg.eqangle.push_back(st);
    });
  }

  // Similar triangles: ordered triangles keyed by log side ratios.
  std::vector<std::array<PointId, 3>> tris;
  std::vector<std::pair<double, std::size_t>> shape_keys;
  for (PointId a = 0; a < n; ++a)
    for (PointId b = 0; b < n; ++b)
      for (PointId d = 0; d < n; ++d) {
        if (a == b || b == d || a == d || !nondegenerate_triangle(c, a, b, d, tol)) continue;
        double k = std::log(norm(c[a] - c[b])) - std::log(norm(c[b] - c[d]));
        shape_keys.emplace_back(k, tris.size());
        tris.push_back({a, b, d});
      }
  SortedKeys by_shape(shape_keys);
  std::set<SimilarPair> similar;
  for (std::size_t i = 0; i < tris.size(); ++i) {
    by_shape.visit(shape_keys[i].first, 2 * tol * 1.01 + 1e-12, 0, [&](std::size_t j) {
      if (j == i || !similar_triangles(c, tris[i], tris[j], tol)) return;
      const auto& t = tris[i];
      const auto& u = tris[j];
      bool o1 = cross(c[t[1]] - c[t[0]], c[t[2]] - c[t[0]]) > 0;
      bool o2 = cross(c[u[1]] - c[u[0]], c[u[2]] - c[u[0]]) > 0;
      similar.insert(canonical_similar({t, u, o1 != o2}));
    });
  }
  cfg.similar.assign(similar.begin(), similar.end());

  // Bisectors: foot on the opposite side line, equal angles at the vertex.
  for (const Statement& col : cfg.coll) {
    auto t = col.args();
    for (int k = 0; k < 3; ++k) {
      PointId foot = t[static_cast<std::size_t>(k)];
      PointId s1 = t[static_cast<std::size_t>((k + 1) % 3)], s2i = t[static_cast<std::size_t>((k + 2) % 3)];
      for (PointId v = 0; v < n; ++v) {
        if (v == foot || v == s1 || v == s2i) continue;
        Statement eq = make(Kind::EqAngle, {v, s1, v, foot, v, foot, v, s2i});
        if (numeric_holds(eq, c, tol)) cfg.bisectors.push_back(canonical_bisector({v, s1, s2i, foot}));
      }
    }
  }
  std::sort(cfg.bisectors.begin(), cfg.bisectors.end());
  cfg.bisectors.erase(std::unique(cfg.bisectors.begin(), cfg.bisectors.end()), cfg.bisectors.end());

  for (auto* fam : {&cfg.coll, &cfg.cyclic, &cfg.para, &cfg.perp, &cfg.cong, &cfg.midpoint, &cfg.eqangle})
    sort_unique(*fam);
  return cfg;
}

bool key_less(const RuleInstance& a, const RuleInstance& b) {
  if (a.rule_id != b.rule_id) return a.rule_id < b.rule_id;
  if (a.conclusion != b.conclusion) return a.conclusion < b.conclusion;
  if (a.hypotheses != b.hypotheses)
    return std::lexicographical_compare(a.hypotheses.begin(), a.hypotheses.end(), b.hypotheses.begin(),
                                        b.hypotheses.end());
  return a.binding < b.binding;
}

void sort_and_dedup(std::vector<RuleInstance>& instances) {
  std::sort(instances.begin(), instances.end(), key_less);
  instances.erase(std::unique(instances.begin(), instances.end(),
                              [](const RuleInstance& a, const RuleInstance& b) { return a.same_key(b); }),
                  instances.end());
}

std::optional<RuleInstance> make_instance(const std::vector<Rule>& catalog, std::size_t rule_index,
                                          std::vector<PointId> binding) {
  const Rule& r = catalog[rule_index];
  if (!nondegenerate_instance(r.conclusion, binding)) return std::nullopt;
  for (const Statement& h : r.hypotheses)
    if (!nondegenerate_instance(h, binding)) return std::nullopt;
  RuleInstance inst;
  inst.rule_index = rule_index;
  inst.rule_id = r.id;
  for (const Statement& h : r.hypotheses) inst.hypotheses.push_back(instantiate(h, binding));
  sort_unique(inst.hypotheses);
  inst.conclusion = instantiate(r.conclusion, binding);
  if (std::binary_search(inst.hypotheses.begin(), inst.hypotheses.end(), inst.conclusion)) return std::nullopt;
  inst.binding = std::move(binding);
  return inst;
}

namespace {

bool vertex_form(const Statement& pattern) {
  auto a = pattern.args();
  return pattern.kind() == Kind::EqAngle && a[0] == a[2] && a[4] == a[6] && a[0] != a[1] && a[2] != a[3] &&
         a[1] != a[3] && a[4] != a[5] && a[6] != a[7] && a[5] != a[7];
}

// Per-family point index: statements of a family that mention a point.
struct FamilyIndex {
  std::array<std::vector<std::vector<std::uint32_t>>, 9> by_point;

  FamilyIndex(const ConfigSet& cfg, std::size_t n) {
    for (Kind k : kAllKinds) {
      const auto* fam = cfg.family(k);
      if (!fam) continue;
      auto& idx = by_point[static_cast<std::size_t>(k)];
      idx.assign(n, {});
      for (std::uint32_t i = 0; i < fam->size(); ++i) {
        auto pts = points_of((*fam)[i]);
        for (PointId p : pts) idx[p].push_back(i);
      }
    }
  }
};

class RuleSearch {
public:
  RuleSearch(const std::vector<Rule>& catalog, std::size_t rule_index, const ConfigSet& cfg,
             const FamilyIndex& index, const Coordinates& c, double tol, std::vector<RuleInstance>& out)
      : catalog_(catalog),
        rule_(catalog[rule_index]),
        rule_index_(rule_index),
        cfg_(cfg),
        index_(index),
        coords_(c),
        tol_(tol),
        out_(out),
        bind_(rule_.variable_count(), kUnbound),
        done_(rule_.hypotheses.size(), 0) {}

  void run() {
    search(0);
  }

private:
  static constexpr int kUnbound = -1;

  std::size_t unbound_count(const Statement& h) const {
    std::size_t k = 0;
    auto pts = points_of(h);
    for (PointId v : pts)
      if (bind_[v] == kUnbound) ++k;
    return k;
  }

  bool drivable(const Statement& h) const {
    if (!cfg_.family(h.kind())) return false;
    return h.kind() != Kind::EqAngle || vertex_form(h);
  }

  std::vector<PointId> current_binding() const {
    std::vector<PointId> b(bind_.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<PointId>(bind_[i]);
    return b;
  }

  bool holds(const Statement& pattern) const {
    return nondegenerate_instance(pattern, current_binding()) && numeric_holds(instantiate(pattern, current_binding()), coords_, tol_);
  }

  void search(std::size_t completed) {
    if (completed == rule_.hypotheses.size()) {
      auto inst = make_instance(catalog_, rule_index_, current_binding());
      if (inst && numeric_holds(inst->conclusion, coords_, tol_)) out_.push_back(std::move(*inst));
      return;
    }
    // Fully bound hypotheses first, then family-driven ones with the fewest
    // unbound variables, then brute-force extension.
    std::size_t best = rule_.hypotheses.size();
    std::size_t best_score = ~std::size_t{0};
    for (std::size_t h = 0; h < rule_.hypotheses.size(); ++h) {
      if (done_[h]) continue;
      const Statement& pat = rule_.hypotheses[h];
      std::size_t unbound = unbound_count(pat);
      std::size_t score = unbound == 0 ? 0 : (drivable(pat) ? unbound : 100 + unbound);
      if (score < best_score) {
        best_score = score;
        best = h;
      }
    }
    const Statement& pat = rule_.hypotheses[best];
    if (best_score == 0) {
      if (!holds(pat)) return;
      done_[best] = 1;
      search(completed + 1);
      done_[best] = 0;
      return;
    }
    if (best_score < 100) {
      drive(best, completed);
      return;
    }
    // Extend one unbound variable of the hypothesis over all free points.
    PointId var = 0;
    for (PointId v : points_of(pat))
      if (bind_[v] == kUnbound) {
        var = v;
        break;
      }
    for (PointId p = 0; p < coords_.size(); ++p) {
      bind_[var] = p;
      search(completed);
      bind_[var] = kUnbound;
    }
  }

  void drive(std::size_t h, std::size_t completed) {
    const Statement& pat = rule_.hypotheses[h];
    const auto& fam = *cfg_.family(pat.kind());
    const auto& group = symmetry_group(pat.kind());
    auto pargs = pat.args();

    // Restrict to members mentioning an already bound point, if any.
    const std::vector<std::uint32_t>* candidates = nullptr;
    for (PointId v : pargs) {
      if (bind_[v] == kUnbound) continue;
      const auto& lst = index_.by_point[static_cast<std::size_t>(pat.kind())][static_cast<std::size_t>(bind_[v])];
      if (!candidates || lst.size() < candidates->size()) candidates = &lst;
    }
    auto try_member = [&](const Statement& member) {
      auto margs = member.args();
      for (const auto& perm : group) {
        std::array<PointId, 8> newly{};
        std::size_t n_new = 0;
        bool ok = true;
        for (std::size_t j = 0; j < pargs.size() && ok; ++j) {
          PointId var = pargs[j];
          PointId pt = margs[perm[j]];
          if (bind_[var] != kUnbound) {
            ok = bind_[var] == pt;
          } else {
            bind_[var] = pt;
            newly[n_new++] = var;
          }
        }
        if (ok) {
          done_[h] = 1;
          search(completed + 1);
          done_[h] = 0;
        }
        for (std::size_t k = 0; k < n_new; ++k) bind_[newly[k]] = kUnbound;
      }
    };
    if (candidates) {
      for (auto i : *candidates) try_member(fam[i]);
    } else {
      for (const auto& m : fam) try_member(m);
    }
  }

  const std::vector<Rule>& catalog_;
  const Rule& rule_;
  std::size_t rule_index_;
  const ConfigSet& cfg_;
  const FamilyIndex& index_;
  const Coordinates& coords_;
  double tol_;
  std::vector<RuleInstance>& out_;
  std::vector<int> bind_;
  std::vector<char> done_;
};

} // namespace

std::vector<RuleInstance> match_rules(const ConfigSet& cfg, const std::vector<Rule>& catalog,
                                      const Coordinates& c, double tol) {
  FamilyIndex index(cfg, c.size());
  std::vector<RuleInstance> out;
  for (std::size_t r = 0; r < catalog.size(); ++r) {
    std::vector<RuleInstance> found;
    RuleSearch(catalog, r, cfg, index, c, tol, found).run();
    sort_and_dedup(found);
    out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  sort_and_dedup(out);
  return out;
}

} // namespace geo
