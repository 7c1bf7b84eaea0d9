#pragma once

#include "geoprover/problem.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace geo {

struct Vec2 {
  double x = 0, y = 0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
double norm(Vec2 a);

// Immutable point coordinates of one sampled diagram.
class Coordinates {
public:
  Coordinates() = default;
  Coordinates(std::vector<Vec2> points, std::uint64_t seed);

  const Vec2& operator[](PointId p) const { return points_[p]; }
  std::size_t size() const { return points_.size(); }
  std::uint64_t seed() const { return seed_; }
  // Largest bounding-box side; residuals are normalized by powers of it.
  double scale() const { return scale_; }
  const std::vector<Vec2>& points() const { return points_; }

  Coordinates scaled(double factor) const;

private:
  std::vector<Vec2> points_;
  std::uint64_t seed_ = 0;
  double scale_ = 1;
};

struct Tolerances {
  double build = 1e-10;       // construction constraints after building
  double check = 1e-7;        // matcher / audit decisions
  double separation = 1e-3;   // minimum point distance after normalization
  int max_attempts = 64;
};

class DiagramError : public std::runtime_error {
public:
  enum class Code { DegenerateProblem, UnsolvableConstruction };
  DiagramError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

private:
  Code code_;
};

// Deterministic in (problem, seed). Free points are drawn in the unit box and
// the finished diagram is normalized back into it; degenerate samples are
// redrawn from derived sub-seeds.
Coordinates build_diagram(const Problem& p, std::uint64_t seed, const Tolerances& tol = {});

// Scale-normalized residual of the defining identity; +inf when the statement
// is undefined on these coordinates (e.g. an angle of a zero-length line).
double residual(const Statement& s, const Coordinates& c);
bool numeric_holds(const Statement& s, const Coordinates& c, double tol);

// (AC^2 + BD^2 - AD^2 - BC^2) / 2, normalized; equals -AB.CD, so it vanishes
// exactly when AB is perpendicular to CD.
double perp_identity_residual(const Coordinates& c, PointId a, PointId b, PointId cc, PointId d);

// Intersections of two circles, or nullopt when they do not meet.
std::optional<std::array<Vec2, 2>> intersect_circles(Vec2 c1, double r1, Vec2 c2, double r2);

// Absolute sine of the angle at `vertex`; used to screen sine variables.
double abs_sine(const Coordinates& c, PointId p, PointId vertex, PointId q);

nlohmann::json diagram_to_json(const Problem& p, const Coordinates& c);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

} // namespace geo
