#include "rdv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rdv {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidTerrain: return "InvalidTerrain";
    case ErrorCode::NotOnBoundary: return "NotOnBoundary";
    case ErrorCode::DegenerateRay: return "DegenerateRay";
    case ErrorCode::TooManyPaths: return "TooManyPaths";
    case ErrorCode::AmbiguousTie: return "AmbiguousTie";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::NumericFailure: return "NumericFailure";
    case ErrorCode::SameStart: return "SameStart";
    case ErrorCode::SameLabel: return "SameLabel";
    case ErrorCode::HasObstacles: return "HasObstacles";
    case ErrorCode::InvalidStrategyParams: return "InvalidStrategyParams";
    case ErrorCode::ScheduleMismatch: return "ScheduleMismatch";
    case ErrorCode::WalkOffCycle: return "WalkOffCycle";
    case ErrorCode::GeometryOverlap: return "GeometryOverlap";
    case ErrorCode::GenerationExhausted: return "GenerationExhausted";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Polygon

double Polygon::perimeter() const {
  double sum = 0;
  for (std::size_t i = 0; i < size(); ++i) sum += edge(i).length();
  return sum;
}

double Polygon::signed_area() const {
  double twice = 0;
  for (std::size_t i = 0; i < size(); ++i) twice += cross(vertex(i), vertex(i + 1));
  return 0.5 * twice;
}

Polygon Polygon::reversed() const {
  std::vector<Point> v(vertices_.rbegin(), vertices_.rend());
  return Polygon(std::move(v));
}

Polygon Polygon::transformed(const RigidMotion& m) const {
  std::vector<Point> v;
  v.reserve(size());
  for (const auto& p : vertices_) v.push_back(m * p);
  return Polygon(std::move(v));
}

// ---------------------------------------------------------------------------
// Predicates

Point closest_point_on_segment(const Point& p, const Point& a, const Point& b) {
  const Vec2 e = b - a;
  const double len2 = e.squaredNorm();
  if (len2 == 0) return a;
  const double t = std::clamp((p - a).dot(e) / len2, 0.0, 1.0);
  return a + t * e;
}

double distance_to_segment(const Point& p, const Point& a, const Point& b) {
  return (p - closest_point_on_segment(p, a, b)).norm();
}

bool point_in_polygon(const Point& p, const Polygon& poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = poly.vertices()[i];
    const Point& b = poly.vertices()[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_boundary(const Point& p, const Polygon& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Segment e = poly.edge(i);
    best = std::min(best, distance_to_segment(p, e.a, e.b));
  }
  return best;
}

Locus classify_point(const Point& p, const Terrain& t) {
  Locus best;
  double best_d = std::numeric_limits<double>::infinity();
  for (PolygonId id = 0; id < t.polygon_count(); ++id) {
    const Polygon& poly = t.polygon(id);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Segment e = poly.edge(i);
      const double d = distance_to_segment(p, e.a, e.b);
      if (d < best_d) {
        best_d = d;
        best.polygon = id;
        best.edge = i;
      }
    }
  }
  if (best_d <= kEpsGeom) {
    const Segment e = t.polygon(best.polygon).edge(best.edge);
    best.kind = Locus::Kind::Boundary;
    best.snapped = closest_point_on_segment(p, e.a, e.b);
    return best;
  }
  Locus out;
  out.snapped = p;
  if (!point_in_polygon(p, t.outer())) {
    out.kind = Locus::Kind::Outside;
    return out;
  }
  for (PolygonId id = 1; id < t.polygon_count(); ++id) {
    if (point_in_polygon(p, t.polygon(id))) {
      out.kind = Locus::Kind::Outside;
      return out;
    }
  }
  out.kind = Locus::Kind::Interior;
  return out;
}

namespace {

struct LineEvents {
  std::vector<double> ts;
  std::vector<std::pair<double, double>> overlaps;
};

// Parameters along origin + s * dir (dir unit) where the line meets the
// polygon edges, restricted to [lo, hi].
void collect_events(const Point& o, const Vec2& d, const Polygon& poly, double lo, double hi,
                    LineEvents& out) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Segment e = poly.edge(i);
    const double da = cross(d, e.a - o);
    const double db = cross(d, e.b - o);
    const double ta = (e.a - o).dot(d);
    const double tb = (e.b - o).dot(d);
    auto push = [&](double s) {
      if (s >= lo - kEpsGeom && s <= hi + kEpsGeom) out.ts.push_back(s);
    };
    const bool a_on = std::abs(da) <= kEpsGeom;
    const bool b_on = std::abs(db) <= kEpsGeom;
    if (a_on && b_on) {
      push(ta);
      push(tb);
      const double s0 = std::max(std::min(ta, tb), lo);
      const double s1 = std::min(std::max(ta, tb), hi);
      if (s1 - s0 > kEpsGeom) out.overlaps.emplace_back(s0, s1);
      continue;
    }
    if (a_on) {
      push(ta);
      continue;
    }
    if (b_on) {
      push(tb);
      continue;
    }
    if ((da > 0) == (db > 0)) continue;
    const double frac = da / (da - db);
    push(ta + frac * (tb - ta));
  }
}

void sort_merge(std::vector<double>& ts) {
  std::sort(ts.begin(), ts.end());
  std::vector<double> merged;
  for (double t : ts) {
    if (merged.empty() || t - merged.back() > kEpsGeom) merged.push_back(t);
  }
  ts.swap(merged);
}

PolygonId nearest_polygon(const Point& p, const Terrain& t, Point* snapped) {
  PolygonId best_id = kOuter;
  double best = std::numeric_limits<double>::infinity();
  for (PolygonId id = 0; id < t.polygon_count(); ++id) {
    const Polygon& poly = t.polygon(id);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Segment e = poly.edge(i);
      const Point c = closest_point_on_segment(p, e.a, e.b);
      const double d = (c - p).norm();
      if (d < best) {
        best = d;
        best_id = id;
        *snapped = c;
      }
    }
  }
  return best_id;
}

double segments_distance(const Segment& s, const Segment& u) {
  const double o1 = cross(s.b - s.a, u.a - s.a);
  const double o2 = cross(s.b - s.a, u.b - s.a);
  const double o3 = cross(u.b - u.a, s.a - u.a);
  const double o4 = cross(u.b - u.a, s.b - u.a);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0)))
    return 0;
  return std::min({distance_to_segment(s.a, u.a, u.b), distance_to_segment(s.b, u.a, u.b),
                   distance_to_segment(u.a, s.a, s.b), distance_to_segment(u.b, s.a, s.b)});
}

std::string polygon_name(int id) {
  return id == kOuter ? std::string("outer polygon") : "obstacle " + std::to_string(id);
}

[[noreturn]] void reject(int id, const std::string& why) {
  throw Error(ErrorCode::InvalidTerrain, polygon_name(id) + ": " + why);
}

// Drops repeated and straight-through vertices; returns the cleaned polygon.
Polygon normalize(const Polygon& in, int id) {
  if (in.size() < 3) reject(id, "fewer than 3 vertices");
  std::vector<std::pair<Point, std::size_t>> v;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const Point& p = in.vertices()[i];
    if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
      reject(id, "vertex " + std::to_string(i) + " is not finite");
    if (std::abs(p.x()) > kMaxCoord || std::abs(p.y()) > kMaxCoord)
      reject(id, "vertex " + std::to_string(i) + " exceeds coordinate bound 1e6");
    v.emplace_back(p, i);
  }
  bool changed = true;
  while (changed && v.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point& prev = v[(i + v.size() - 1) % v.size()].first;
      const Point& cur = v[i].first;
      const Point& next = v[(i + 1) % v.size()].first;
      if ((cur - prev).norm() <= kEpsGeom) {
        v.erase(v.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
      const double base = (next - prev).norm();
      const double off = base > 0 ? std::abs(cross(next - prev, cur - prev)) / base : 0.0;
      if (off <= kEpsGeom) {
        if ((cur - prev).dot(next - cur) <= 0)
          reject(id, "boundary folds back on itself at vertex " + std::to_string(v[i].second));
        v.erase(v.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
  if (v.size() < 3) reject(id, "fewer than 3 non-collinear vertices");
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Segment ei{v[i].first, v[(i + 1) % n].first};
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Segment ej{v[j].first, v[(j + 1) % n].first};
      if (segments_distance(ei, ej) <= kEpsGeom) {
        std::ostringstream msg;
        msg << "edges " << v[i].second << "-" << v[(i + 1) % n].second << " and " << v[j].second
            << "-" << v[(j + 1) % n].second << " intersect (polygon not simple)";
        reject(id, msg.str());
      }
    }
  }
  std::vector<Point> pts;
  for (const auto& [p, idx] : v) pts.push_back(p);
  Polygon out(std::move(pts));
  if (std::abs(out.signed_area()) <= kEpsGeom) reject(id, "zero area");
  return out;
}

double polygons_distance(const Polygon& a, const Polygon& b) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      best = std::min(best, segments_distance(a.edge(i), b.edge(j)));
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Terrain

Terrain Terrain::create(Polygon outer, std::vector<Polygon> obstacles) {
  Terrain t;
  Polygon o = normalize(outer, kOuter);
  if (o.orientation() != Orientation::CounterClockwise) o = o.reversed();
  t.polygons_.push_back(std::move(o));
  for (std::size_t k = 0; k < obstacles.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    Polygon h = normalize(obstacles[k], id);
    if (h.orientation() != Orientation::Clockwise) h = h.reversed();
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (!point_in_polygon(h.vertices()[i], t.outer()))
        reject(id, "vertex " + std::to_string(i) + " lies outside the outer polygon");
    }
    if (polygons_distance(h, t.outer()) < kMinClearance)
      reject(id, "touches or comes within 1e-8 of the outer boundary");
    for (int other = 1; other < static_cast<int>(t.polygons_.size()); ++other) {
      const Polygon& g = t.polygons_[static_cast<std::size_t>(other)];
      if (polygons_distance(h, g) < kMinClearance || point_in_polygon(h.vertices()[0], g) ||
          point_in_polygon(g.vertices()[0], h))
        reject(id, "overlaps or touches " + polygon_name(other));
    }
    t.polygons_.push_back(std::move(h));
  }
  t.compute_stats();
  return t;
}

void Terrain::compute_stats() {
  perimeter_ = 0;
  max_obstacle_perimeter_ = 0;
  for (std::size_t i = 0; i < polygons_.size(); ++i) {
    const double p = polygons_[i].perimeter();
    perimeter_ += p;
    if (i > 0) max_obstacle_perimeter_ = std::max(max_obstacle_perimeter_, p);
  }
}

double Terrain::diameter() const {
  Eigen::AlignedBox2d box;
  for (const auto& p : outer().vertices()) box.extend(p);
  return box.diagonal().norm();
}

Terrain Terrain::transformed(const RigidMotion& m) const {
  Terrain t;
  for (const auto& p : polygons_) t.polygons_.push_back(p.transformed(m));
  t.compute_stats();
  return t;
}

PerimeterStats perimeter_stats(const Terrain& t) {
  return {t.perimeter(), t.max_obstacle_perimeter()};
}

// ---------------------------------------------------------------------------
// Segments and rays

bool segment_in_terrain(const Point& a, const Point& b, const Terrain& t) {
  const double len = (b - a).norm();
  if (!in_closed_terrain(a, t) || !in_closed_terrain(b, t)) return false;
  if (len <= kEpsGeom) return true;
  const Vec2 d = (b - a) / len;
  LineEvents ev;
  for (PolygonId id = 0; id < t.polygon_count(); ++id) collect_events(a, d, t.polygon(id), 0, len, ev);
  ev.ts.push_back(0);
  ev.ts.push_back(len);
  for (double& s : ev.ts) s = std::clamp(s, 0.0, len);
  sort_merge(ev.ts);
  for (std::size_t i = 0; i + 1 < ev.ts.size(); ++i) {
    if (!in_closed_terrain(a + 0.5 * (ev.ts[i] + ev.ts[i + 1]) * d, t)) return false;
  }
  return true;
}

RayCast cast_ray(const Point& origin, const Vec2& direction, const Terrain& t, double max_distance) {
  const Vec2 d = direction.normalized();
  LineEvents ev;
  const double hi = std::isfinite(max_distance) ? max_distance : std::numeric_limits<double>::max();
  for (PolygonId id = 0; id < t.polygon_count(); ++id) collect_events(origin, d, t.polygon(id), 0, hi, ev);
  std::vector<double> ts;
  for (double s : ev.ts)
    if (s > kEpsGeom) ts.push_back(std::min(s, hi));
  sort_merge(ts);

  auto blocked = [&](double at) -> RayCast {
    for (const auto& [s0, s1] : ev.overlaps) {
      if (s0 < at - kEpsGeom && s1 > kEpsGeom)
        throw Error(ErrorCode::DegenerateRay, "ray runs along a boundary edge");
    }
    if (at <= kEpsGeom) return {RayCast::Kind::ExitsImmediately, {origin, -1, 0}};
    Point snapped;
    const PolygonId id = nearest_polygon(origin + at * d, t, &snapped);
    return {RayCast::Kind::Hit, {snapped, id, at}};
  };

  double prev = 0;
  for (double s : ts) {
    if (!in_closed_terrain(origin + 0.5 * (prev + s) * d, t)) return blocked(prev);
    prev = s;
  }
  if (std::isfinite(max_distance)) {
    if (max_distance - prev > kEpsGeom && !in_closed_terrain(origin + 0.5 * (prev + max_distance) * d, t))
      return blocked(prev);
    for (const auto& [s0, s1] : ev.overlaps) {
      if (s0 < max_distance - kEpsGeom && s1 > kEpsGeom)
        throw Error(ErrorCode::DegenerateRay, "segment runs along a boundary edge");
    }
    return {RayCast::Kind::Clear, {origin + max_distance * d, -1, max_distance}};
  }
  // The terrain is bounded: beyond the last boundary event lies the exterior.
  return blocked(prev);
}

std::optional<RayHit> first_hit(const Point& origin, const Vec2& direction, const Terrain& t) {
  const RayCast c = cast_ray(origin, direction, t);
  if (c.kind == RayCast::Kind::Hit) return c.hit;
  return std::nullopt;
}

std::vector<double> boundary_crossings(const Point& origin, const Vec2& direction, const Polygon& poly,
                                       double max_distance) {
  LineEvents ev;
  const double hi = std::isfinite(max_distance) ? max_distance : std::numeric_limits<double>::max();
  collect_events(origin, direction.normalized(), poly, 0, hi, ev);
  for (double& s : ev.ts) s = std::clamp(s, 0.0, hi);
  sort_merge(ev.ts);
  return ev.ts;
}

// ---------------------------------------------------------------------------
// Boundary walking

std::optional<BoundaryPosition> locate_on_boundary(const Point& p, const Polygon& poly) {
  double best = std::numeric_limits<double>::infinity();
  BoundaryPosition pos{0, 0, 0};
  double arc = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Segment e = poly.edge(i);
    const double len = e.length();
    const double t = std::clamp((p - e.a).dot(e.b - e.a) / (len * len), 0.0, 1.0);
    const double d = (e.at(t) - p).norm();
    if (d < best) {
      best = d;
      pos = {i, t, arc + t * len};
    }
    arc += len;
  }
  if (best > kEpsGeom) return std::nullopt;
  return pos;
}

double polyline_length(const Polyline& line) {
  double sum = 0;
  for (std::size_t i = 1; i < line.size(); ++i) sum += (line[i] - line[i - 1]).norm();
  return sum;
}

std::pair<Polyline, Polyline> split_polyline(const Polyline& line, double s) {
  Polyline head{line.front()};
  Polyline tail;
  double walked = 0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    const double len = (line[i] - line[i - 1]).norm();
    if (tail.empty() && walked + len >= s) {
      const double f = len > 0 ? std::clamp((s - walked) / len, 0.0, 1.0) : 0.0;
      const Point cut = line[i - 1] + f * (line[i] - line[i - 1]);
      append_polyline(head, {cut});
      tail.push_back(cut);
    }
    if (tail.empty()) {
      head.push_back(line[i]);
    } else {
      append_polyline(tail, {line[i]});
    }
    walked += len;
  }
  if (tail.empty()) tail.push_back(line.back());
  return {head, tail};
}

void append_polyline(Polyline& line, const Polyline& tail) {
  for (const auto& p : tail) {
    if (!line.empty() && (line.back() - p).norm() <= kEpsGeom) continue;
    line.push_back(p);
  }
}

namespace {

// Walks forward in stored order for `distance` (0 < distance <= perimeter).
Polyline walk_forward(const Point& start, const BoundaryPosition& from, double distance,
                      const Point& end, const Polygon& poly) {
  const double perim = poly.perimeter();
  std::vector<std::pair<double, std::size_t>> ahead;
  double arc = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    double off = std::fmod(arc - from.arc + 2 * perim, perim);
    if (off > kEpsGeom && off < distance - kEpsGeom) ahead.emplace_back(off, i);
    arc += poly.edge(i).length();
  }
  std::sort(ahead.begin(), ahead.end());
  Polyline out{start};
  for (const auto& [off, i] : ahead) append_polyline(out, {poly.vertices()[i]});
  append_polyline(out, {end});
  if (out.size() == 1) out.push_back(end);
  return out;
}

const Polygon& oriented(const Polygon& poly, Orientation o, Polygon& scratch) {
  if (poly.orientation() == o) return poly;
  scratch = poly.reversed();
  return scratch;
}

}  // namespace

Polyline boundary_tour(const Point& start, const Polygon& poly, Orientation orientation) {
  Polygon scratch;
  const Polygon& p = oriented(poly, orientation, scratch);
  const auto pos = locate_on_boundary(start, p);
  if (!pos) throw Error(ErrorCode::NotOnBoundary, "tour start is not on the polygon boundary");
  const Segment e = p.edge(pos->edge);
  const Point s = e.at(pos->t);
  return walk_forward(s, *pos, p.perimeter(), s, p);
}

Polyline boundary_walk_to(const Point& start, const Point& target, const Polygon& poly,
                          Orientation orientation) {
  Polygon scratch;
  const Polygon& p = oriented(poly, orientation, scratch);
  const auto from = locate_on_boundary(start, p);
  const auto to = locate_on_boundary(target, p);
  if (!from || !to) throw Error(ErrorCode::NotOnBoundary, "walk endpoint is not on the polygon boundary");
  const Point s = p.edge(from->edge).at(from->t);
  const Point g = p.edge(to->edge).at(to->t);
  const double perim = p.perimeter();
  const double dist = std::fmod(to->arc - from->arc + 2 * perim, perim);
  if (dist <= kEpsGeom || dist >= perim - kEpsGeom) return {s};
  return walk_forward(s, *from, dist, g, p);
}

}  // namespace rdv
