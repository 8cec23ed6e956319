#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "rdv/error.hpp"

namespace rdv {

using Point = Eigen::Vector2d;
using Vec2 = Eigen::Vector2d;
using Polyline = std::vector<Point>;
using RigidMotion = Eigen::Isometry2d;

/// Absolute tolerance for on-boundary snapping and collinearity.
inline constexpr double kEpsGeom = 1e-9;
/// Coordinates accepted at ingestion lie in [-kMaxCoord, kMaxCoord].
inline constexpr double kMaxCoord = 1e6;
/// Obstacles keep at least this distance from every other boundary.
inline constexpr double kMinClearance = 10 * kEpsGeom;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Rotation by +90 degrees.
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

struct Segment {
  Point a;
  Point b;

  double length() const { return (b - a).norm(); }
  Vec2 direction() const { return (b - a).normalized(); }
  Point at(double t) const { return a + t * (b - a); }
};

enum class Orientation { Clockwise, CounterClockwise };

inline Orientation opposite(Orientation o) {
  return o == Orientation::Clockwise ? Orientation::CounterClockwise : Orientation::Clockwise;
}

class Polygon {
 public:
  Polygon() = default;
  explicit Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {}

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  // Cyclic access.
  const Point& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }
  Segment edge(std::size_t i) const { return {vertex(i), vertex(i + 1)}; }

  double perimeter() const;
  double signed_area() const;
  Orientation orientation() const {
    return signed_area() > 0 ? Orientation::CounterClockwise : Orientation::Clockwise;
  }
  Polygon reversed() const;
  Polygon transformed(const RigidMotion& m) const;

 private:
  std::vector<Point> vertices_;
};

/// 0 is the outer polygon, 1..k the obstacles.
using PolygonId = int;
inline constexpr PolygonId kOuter = 0;

/// Closed outer polygon minus disjoint open obstacles. Outer is stored
/// counterclockwise and obstacles clockwise, so walking any boundary in
/// stored order keeps the terrain on the left.
class Terrain {
 public:
  /// Validates and normalizes. Throws Error(InvalidTerrain) naming the
  /// offending polygon and input vertex indices.
  static Terrain create(Polygon outer, std::vector<Polygon> obstacles = {});

  const Polygon& outer() const { return polygons_.front(); }
  std::vector<Polygon> obstacles() const { return {polygons_.begin() + 1, polygons_.end()}; }
  std::size_t obstacle_count() const { return polygons_.size() - 1; }
  const Polygon& polygon(PolygonId id) const { return polygons_.at(static_cast<std::size_t>(id)); }
  int polygon_count() const { return static_cast<int>(polygons_.size()); }

  double perimeter() const { return perimeter_; }
  double max_obstacle_perimeter() const { return max_obstacle_perimeter_; }
  /// Diagonal of the bounding box of the outer polygon.
  double diameter() const;

  /// Applies a rigid motion without revalidating (rigid motions preserve
  /// every invariant up to rounding).
  Terrain transformed(const RigidMotion& m) const;

 private:
  std::vector<Polygon> polygons_;
  double perimeter_ = 0;
  double max_obstacle_perimeter_ = 0;

  void compute_stats();
};

struct PerimeterStats {
  double P;
  double x;
};

PerimeterStats perimeter_stats(const Terrain& t);

struct Locus {
  enum class Kind { Interior, Boundary, Outside };
  Kind kind = Kind::Outside;
  PolygonId polygon = -1;
  std::size_t edge = 0;
  /// Projection onto the boundary edge when kind == Boundary, else the query.
  Point snapped = Point::Zero();
};

// ---------------------------------------------------------------------------
// Primitive predicates

double distance_to_segment(const Point& p, const Point& a, const Point& b);
Point closest_point_on_segment(const Point& p, const Point& a, const Point& b);
/// Crossing-number test; boundary points give an arbitrary answer.
bool point_in_polygon(const Point& p, const Polygon& poly);
double distance_to_boundary(const Point& p, const Polygon& poly);

Locus classify_point(const Point& p, const Terrain& t);
inline bool in_closed_terrain(const Point& p, const Terrain& t) {
  return classify_point(p, t).kind != Locus::Kind::Outside;
}

/// True iff the closed segment [a, b] lies in the closed terrain.
bool segment_in_terrain(const Point& a, const Point& b, const Terrain& t);

// ---------------------------------------------------------------------------
// Rays

struct RayHit {
  Point point;
  PolygonId polygon;
  double distance;
};

struct RayCast {
  enum class Kind { Hit, Clear, ExitsImmediately };
  Kind kind;
  RayHit hit;  // valid when kind == Hit
};

/// Travels from origin along the unit direction until progress is blocked.
/// Clear means nothing blocks within max_distance.
RayCast cast_ray(const Point& origin, const Vec2& direction, const Terrain& t,
                 double max_distance = std::numeric_limits<double>::infinity());

/// Closest blocking boundary point strictly ahead of origin. nullopt when
/// origin is on a boundary and the ray immediately leaves the terrain.
/// Throws DegenerateRay if the ray runs along a boundary edge before the hit.
std::optional<RayHit> first_hit(const Point& origin, const Vec2& direction, const Terrain& t);

/// Ray parameters (distance from origin, >= -eps) of every point of the
/// polygon boundary on the ray within max_distance, sorted ascending.
std::vector<double> boundary_crossings(const Point& origin, const Vec2& direction,
                                       const Polygon& poly,
                                       double max_distance = std::numeric_limits<double>::infinity());

// ---------------------------------------------------------------------------
// Boundary walking

struct BoundaryPosition {
  std::size_t edge;
  double t;    // fraction along the edge in stored order
  double arc;  // arc length from vertex 0 in stored order
};

/// Locates p on the polygon boundary; nullopt if farther than kEpsGeom.
std::optional<BoundaryPosition> locate_on_boundary(const Point& p, const Polygon& poly);

double polyline_length(const Polyline& line);

/// Splits at arc length s (clamped to [0, length]); the split point ends the
/// first part and starts the second.
std::pair<Polyline, Polyline> split_polyline(const Polyline& line, double s);

/// Closed walk around the whole boundary starting and ending at start.
Polyline boundary_tour(const Point& start, const Polygon& poly, Orientation orientation);

/// Walk along the boundary in the given orientation from start to target.
Polyline boundary_walk_to(const Point& start, const Point& target, const Polygon& poly,
                          Orientation orientation);

/// Appends `tail` to `line`, skipping a leading point that repeats the end.
void append_polyline(Polyline& line, const Polyline& tail);

/// Orientation in which walking keeps the terrain on the left.
inline Orientation interior_left(PolygonId id) {
  return id == kOuter ? Orientation::CounterClockwise : Orientation::Clockwise;
}

inline Vec2 rotate(const Vec2& v, double angle) { return Eigen::Rotation2Dd(angle) * v; }

}  // namespace rdv
