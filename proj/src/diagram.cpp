#include "geoprover/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace geo {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

Coordinates::Coordinates(std::vector<Vec2> points, std::uint64_t seed)
    : points_(std::move(points)), seed_(seed) {
  if (points_.empty()) return;
  double lo_x = points_[0].x, hi_x = lo_x, lo_y = points_[0].y, hi_y = lo_y;
  for (const auto& p : points_) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  scale_ = std::max({hi_x - lo_x, hi_y - lo_y, 1e-300});
}

Coordinates Coordinates::scaled(double factor) const {
  std::vector<Vec2> pts = points_;
  for (auto& p : pts) p = factor * p;
  return Coordinates(std::move(pts), seed_);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::optional<std::array<Vec2, 2>> intersect_circles(Vec2 c1, double r1, Vec2 c2, double r2) {
  Vec2 d = c2 - c1;
  double dist = norm(d);
  if (dist == 0 || dist > r1 + r2 || dist < std::abs(r1 - r2)) return std::nullopt;
  double along = (r1 * r1 - r2 * r2 + dist * dist) / (2 * dist);
  double h = std::sqrt(std::max(0.0, r1 * r1 - along * along));
  Vec2 u = (1 / dist) * d;
  Vec2 base = c1 + along * u;
  Vec2 n{-u.y, u.x};
  return std::array<Vec2, 2>{base + h * n, base - h * n};
}

double abs_sine(const Coordinates& c, PointId p, PointId vertex, PointId q) {
  Vec2 u = c[p] - c[vertex], v = c[q] - c[vertex];
  double nu = norm(u), nv = norm(v);
  if (nu == 0 || nv == 0) return 0;
  return std::abs(cross(u, v)) / (nu * nv);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  // 53 random bits; avoids the implementation-defined distributions.
  double uniform(double lo, double hi) {
    double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

private:
  std::mt19937_64 rng_;
};

enum class Failure { None, Degenerate, Empty };

struct Line {
  Vec2 p, dir;  // dir is a unit vector
};
struct Circle {
  Vec2 centre;
  double radius;
};

struct Builder {
  const Problem& problem;
  const Tolerances& tol;
  Sampler rng;
  std::vector<Vec2> pts;
  Failure failure = Failure::None;

  bool unit(Vec2 v, Vec2& out) {
    double n = norm(v);
    if (n < 1e-9) {
      failure = Failure::Degenerate;
      return false;
    }
    out = (1 / n) * v;
    return true;
  }

  bool line_of(const GeomObject& o, Line& out) {
    const auto& q = o.pts;
    Vec2 dir;
    switch (o.kind) {
      case GeomObject::Kind::Line:
        if (!unit(pts[q[1]] - pts[q[0]], dir)) return false;
        out = {pts[q[0]], dir};
        return true;
      case GeomObject::Kind::PLine:
        if (!unit(pts[q[2]] - pts[q[1]], dir)) return false;
        out = {pts[q[0]], dir};
        return true;
      case GeomObject::Kind::TLine:
        if (!unit(pts[q[2]] - pts[q[1]], dir)) return false;
        out = {pts[q[0]], Vec2{-dir.y, dir.x}};
        return true;
      case GeomObject::Kind::Circle: break;
    }
    failure = Failure::Degenerate;
    return false;
  }

  Circle circle_of(const GeomObject& o) { return {pts[o.pts[0]], norm(pts[o.pts[1]] - pts[o.pts[0]])}; }

  bool clashes(Vec2 v, double min_dist) const {
    for (const auto& p : pts)
      if (norm(v - p) < min_dist) return true;
    return false;
  }

  // Picks the first candidate that does not coincide with an existing point.
  bool choose(const std::vector<Vec2>& candidates, Vec2& out) {
    double eps = tol.separation * 1e-3;
    for (const auto& c : candidates) {
      if (!clashes(c, eps)) {
        out = c;
        return true;
      }
    }
    failure = candidates.empty() ? Failure::Empty : Failure::Degenerate;
    return false;
  }

  std::vector<Vec2> line_circle(const Line& l, const Circle& c) {
    Vec2 f = l.p - c.centre;
    double b = dot(f, l.dir);
    double disc = b * b - (norm2(f) - c.radius * c.radius);
    if (disc < 0) return {};
    double s = std::sqrt(disc);
    return {l.p + (-b - s) * l.dir, l.p + (-b + s) * l.dir};
  }

  bool intersect(const GeomObject& a, const GeomObject& b, Vec2& out) {
    if (a.is_circle() && b.is_circle()) {
      Circle c1 = circle_of(a), c2 = circle_of(b);
      auto r = intersect_circles(c1.centre, c1.radius, c2.centre, c2.radius);
      if (!r) {
        failure = Failure::Empty;
        return false;
      }
      return choose({(*r)[0], (*r)[1]}, out);
    }
    if (a.is_circle() || b.is_circle()) {
      const GeomObject& lo = a.is_circle() ? b : a;
      const GeomObject& co = a.is_circle() ? a : b;
      Line l;
      if (!line_of(lo, l)) return false;
      auto roots = line_circle(l, circle_of(co));
      if (roots.empty()) {
        failure = Failure::Empty;
        return false;
      }
      return choose(roots, out);
    }
    Line l1, l2;
    if (!line_of(a, l1) || !line_of(b, l2)) return false;
    double den = cross(l1.dir, l2.dir);
    if (std::abs(den) < 1e-6) {
      failure = Failure::Degenerate;
      return false;
    }
    double t = cross(l2.p - l1.p, l2.dir) / den;
    out = l1.p + t * l1.dir;
    return true;
  }

  bool place(const Construction& c, Vec2& out) {
    const auto& in = c.in;
    switch (c.kind) {
      case ConstructionKind::FreePoint:
        out = c.pinned ? Vec2{(*c.pinned)[0], (*c.pinned)[1]} : Vec2{rng.uniform(0, 1), rng.uniform(0, 1)};
        return true;
      case ConstructionKind::OnLine: {
        double t = rng.uniform(-0.5, 1.5);
        out = pts[in[0]] + t * (pts[in[1]] - pts[in[0]]);
        return true;
      }
      case ConstructionKind::ParallelThrough:
      case ConstructionKind::PerpendicularThrough: {
        Line l;
        if (!line_of(c.objects[0], l)) return false;
        double t = rng.uniform(0.2, 0.8) * (rng.uniform(0, 1) < 0.5 ? -1 : 1);
        out = l.p + t * l.dir;
        return true;
      }
      case ConstructionKind::OnCircle: {
        double theta = rng.uniform(0, 2 * std::numbers::pi);
        double r = norm(pts[in[1]] - pts[in[0]]);
        out = pts[in[0]] + r * Vec2{std::cos(theta), std::sin(theta)};
        return true;
      }
      case ConstructionKind::Midpoint: out = 0.5 * (pts[in[0]] + pts[in[1]]); return true;
      case ConstructionKind::Foot:
      case ConstructionKind::Reflect: {
        Line l;
        if (!line_of(GeomObject{GeomObject::Kind::Line, {in[1], in[2], 0}}, l)) return false;
        Vec2 foot = l.p + dot(pts[in[0]] - l.p, l.dir) * l.dir;
        out = c.kind == ConstructionKind::Foot ? foot : 2.0 * foot - pts[in[0]];
        return true;
      }
      case ConstructionKind::Circumcenter: {
        Vec2 a = pts[in[0]], b = pts[in[1]] - a, cc = pts[in[2]] - a;
        double d = 2 * cross(b, cc);
        if (std::abs(d) < 1e-9) {
          failure = Failure::Degenerate;
          return false;
        }
        double bb = norm2(b), ccn = norm2(cc);
        out = a + Vec2{(cc.y * bb - b.y * ccn) / d, (b.x * ccn - cc.x * bb) / d};
        return true;
      }
      case ConstructionKind::Intersect: return intersect(c.objects[0], c.objects[1], out);
    }
    failure = Failure::Degenerate;
    return false;
  }

  bool run() {
    for (const auto& c : problem.constructions) {
      Vec2 v;
      if (!place(c, v)) return false;
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
        failure = Failure::Degenerate;
        return false;
      }
      pts.push_back(v);
    }
    return true;
  }
};

// Translate into the unit box and rescale so the longer side is 1.
std::vector<Vec2> normalize(std::vector<Vec2> pts) {
  if (pts.empty()) return pts;
  Coordinates tmp(pts, 0);
  double lo_x = pts[0].x, lo_y = pts[0].y;
  for (const auto& p : pts) {
    lo_x = std::min(lo_x, p.x);
    lo_y = std::min(lo_y, p.y);
  }
  double k = 1 / tmp.scale();
  for (auto& p : pts) p = k * (p - Vec2{lo_x, lo_y});
  return pts;
}

bool well_separated(const Problem& p, const Coordinates& c, const Tolerances& tol) {
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (norm(c[static_cast<PointId>(i)] - c[static_cast<PointId>(j)]) < tol.separation) return false;
  for (const auto& con : p.constructions) {
    if (con.kind == ConstructionKind::Circumcenter) {
      Vec2 a = c[con.in[0]];
      if (std::abs(cross(c[con.in[1]] - a, c[con.in[2]] - a)) < tol.separation * tol.separation) return false;
    }
    for (const auto& s : con.implied)
      if (!numeric_holds(s, c, tol.build)) return false;
  }
  return true;
}

} // namespace

Coordinates build_diagram(const Problem& p, std::uint64_t seed, const Tolerances& tol) {
  bool saw_degenerate = false;
  for (int attempt = 0; attempt < tol.max_attempts; ++attempt) {
    Builder b{p, tol, Sampler(mix_seed(seed, static_cast<std::uint64_t>(attempt))), {}, Failure::None};
    b.pts.reserve(p.point_count());
    if (!b.run()) {
      if (b.failure != Failure::Empty) saw_degenerate = true;
      continue;
    }
    Coordinates c(normalize(std::move(b.pts)), seed);
    if (well_separated(p, c, tol)) return c;
    saw_degenerate = true;
  }
  if (!saw_degenerate)
    throw DiagramError(DiagramError::Code::UnsolvableConstruction,
                       "UnsolvableConstruction: an intersection is empty on every sample");
  throw DiagramError(DiagramError::Code::DegenerateProblem,
                     "DegenerateProblem: no non-degenerate sample after " + std::to_string(tol.max_attempts) +
                         " attempts");
}

namespace {

double line_angle(Vec2 a, Vec2 b) {
  double t = std::atan2(b.y - a.y, b.x - a.x);
  if (t < 0) t += std::numbers::pi;
  if (t >= std::numbers::pi) t -= std::numbers::pi;
  return t;
}

// Reduce into (-pi/2, pi/2].
double wrap_half_pi(double d) {
  d = std::fmod(d, std::numbers::pi);
  if (d > std::numbers::pi / 2) d -= std::numbers::pi;
  if (d <= -std::numbers::pi / 2) d += std::numbers::pi;
  return d;
}

double cyclic_residual(const Coordinates& c, std::span<const PointId> args) {
  std::array<PointId, 4> ids{};
  std::copy(args.begin(), args.end(), ids.begin());
  std::sort(ids.begin(), ids.end());
  if (std::unique(ids.begin(), ids.end()) - ids.begin() < 4) return 0;
  double s = c.scale();
  int best = -1;
  double best_area = 0;
  for (int skip = 0; skip < 4; ++skip) {
    std::array<Vec2, 3> t;
    int k = 0;
    for (int i = 0; i < 4; ++i)
      if (i != skip) t[static_cast<std::size_t>(k++)] = c[ids[static_cast<std::size_t>(i)]];
    double area = std::abs(cross(t[1] - t[0], t[2] - t[0]));
    if (area > best_area) {
      best_area = area;
      best = skip;
    }
  }
  if (best < 0 || best_area / (s * s) < 1e-12) return kInf;
  std::array<Vec2, 3> t;
  int k = 0;
  for (int i = 0; i < 4; ++i)
    if (i != best) t[static_cast<std::size_t>(k++)] = c[ids[static_cast<std::size_t>(i)]];
  Vec2 b = t[1] - t[0], cc = t[2] - t[0];
  double d = 2 * cross(b, cc);
  Vec2 centre = t[0] + Vec2{(cc.y * norm2(b) - b.y * norm2(cc)) / d, (b.x * norm2(cc) - cc.x * norm2(b)) / d};
  double r = norm(t[0] - centre);
  return std::abs(norm(c[ids[static_cast<std::size_t>(best)]] - centre) - r) / s;
}

double variable_value(const VarId& v, const Coordinates& c) {
  switch (v.kind) {
    case VarId::Kind::Segment: {
      double len = norm(c[static_cast<PointId>(v.a)] - c[static_cast<PointId>(v.b)]);
      switch (v.table) {
        case Table::Len: return len;
        case Table::SqLen: return len * len;
        case Table::LogLen: return len > 0 ? std::log(len) : -kInf;
      }
      return kInf;
    }
    case VarId::Kind::Sine: {
      double s = abs_sine(c, static_cast<PointId>(v.a), static_cast<PointId>(v.b), static_cast<PointId>(v.c));
      return s > 0 ? std::log(s) : -kInf;
    }
    case VarId::Kind::LogConst: return std::log(static_cast<double>(v.a));
  }
  return kInf;
}

} // namespace

double residual(const Statement& st, const Coordinates& c) {
  double s = c.scale();
  auto a = st.args();
  auto P = [&](std::size_t i) { return c[a[i]]; };
  switch (st.kind()) {
    case Kind::Coll: return std::abs(cross(P(1) - P(0), P(2) - P(0))) / (s * s);
    case Kind::Para: return std::abs(cross(P(1) - P(0), P(3) - P(2))) / (s * s);
    case Kind::Perp: return std::abs(dot(P(1) - P(0), P(3) - P(2))) / (s * s);
    case Kind::Cong: return std::abs(norm2(P(1) - P(0)) - norm2(P(3) - P(2))) / (s * s);
    case Kind::Cyclic: return cyclic_residual(c, a);
    case Kind::Midpoint: return norm(P(0) - 0.5 * (P(1) + P(2))) / s;
    case Kind::EqAngle: {
      std::array<double, 4> th{};
      for (std::size_t l = 0; l < 4; ++l) {
        if (norm(P(2 * l + 1) - P(2 * l)) <= 1e-12 * s) return kInf;
        th[l] = line_angle(P(2 * l), P(2 * l + 1));
      }
      return std::abs(wrap_half_pi((th[1] - th[0]) - (th[3] - th[2])));
    }
    case Kind::EqRatio: {
      std::array<double, 4> len{};
      for (std::size_t l = 0; l < 4; ++l) {
        len[l] = norm(P(2 * l + 1) - P(2 * l));
        if (len[l] <= 1e-12 * s) return kInf;
      }
      return std::abs(std::log(len[0]) - std::log(len[1]) - std::log(len[2]) + std::log(len[3]));
    }
    case Kind::AREq: {
      const Equation& e = *st.equation();
      double total = e.constant().get_d();
      for (const Term& t : e.terms()) {
        double v = variable_value(t.var, c);
        if (!std::isfinite(v)) return kInf;
        total += t.coef.get_d() * v;
      }
      switch (e.table()) {
        case Table::Len: return std::abs(total) / s;
        case Table::SqLen: return std::abs(total) / (s * s);
        case Table::LogLen: return std::abs(total);
      }
      return kInf;
    }
  }
  return kInf;
}

bool numeric_holds(const Statement& s, const Coordinates& c, double tol) { return residual(s, c) < tol; }

double perp_identity_residual(const Coordinates& c, PointId a, PointId b, PointId cc, PointId d) {
  auto sq = [&](PointId p, PointId q) { return norm2(c[p] - c[q]); };
  double s = c.scale();
  return std::abs(sq(a, cc) + sq(b, d) - sq(a, d) - sq(b, cc)) / 2 / (s * s);
}

nlohmann::json diagram_to_json(const Problem& p, const Coordinates& c) {
  nlohmann::json pts = nlohmann::json::object();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec2& v = c[static_cast<PointId>(i)];
    pts[p.name(static_cast<PointId>(i))] = {v.x, v.y};
  }
  return {{"seed", c.seed()}, {"scale", c.scale()}, {"points", pts}};
}

} // namespace geo
