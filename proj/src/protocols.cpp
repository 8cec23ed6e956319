#include "rdv/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rdv/medial.hpp"

namespace rdv {

Vec2 compass_north(double compass) { return {-std::sin(compass), std::cos(compass)}; }
Vec2 compass_east(double compass) { return {std::cos(compass), std::sin(compass)}; }

Route::Route(const Polyline& waypoints) {
  for (const auto& p : waypoints) {
    if (!waypoints_.empty() && (waypoints_.back() - p).norm() <= kEpsGeom) continue;
    waypoints_.push_back(p);
  }
}

double Route::length() const { return polyline_length(waypoints_); }

void Route::extend(const Polyline& tail, const std::string& phase) {
  const double before = length();
  if (waypoints_.empty()) {
    *this = Route(tail);
  } else {
    for (const auto& p : tail) {
      if ((waypoints_.back() - p).norm() <= kEpsGeom) continue;
      waypoints_.push_back(p);
    }
  }
  const double added = length() - before;
  if (!phases_.empty() && phases_.back().name == phase) phases_.back().length += added;
  else phases_.push_back({phase, added});
}

std::string modified_label(int mu) {
  if (mu < 1) throw Error(ErrorCode::PreconditionViolation, "labels are positive integers");
  std::string bits;
  for (int m = mu; m > 0; m >>= 1) bits.push_back(static_cast<char>('0' + (m & 1)));
  std::reverse(bits.begin(), bits.end());
  const std::size_t n = bits.size();
  bits.push_back('1');
  bits.append(n, '0');
  return bits;
}

namespace {

bool same_point(const Point& a, const Point& b) { return (a - b).norm() <= kEpsGeom; }

// Strictly further north in the given compass frame, ties broken eastward.
bool north_east_of(const Point& p, const Point& q, double compass) {
  const double dn = compass_north(compass).dot(p - q);
  if (std::abs(dn) > kEpsGeom) return dn > 0;
  return compass_east(compass).dot(p - q) > 0;
}

void require_no_obstacles(const Terrain& t, const char* algo) {
  if (t.obstacle_count() != 0)
    throw Error(ErrorCode::HasObstacles, std::string(algo) + " needs a terrain without obstacles");
}

Polyline reversed(Polyline p) {
  std::reverse(p.begin(), p.end());
  return p;
}

// Shared loop of the ray and segment progress phases.
ProgressResult progress(const Point& z, const Vec2& dir, const Terrain& t, std::optional<double> limit,
                        const Point& target) {
  ProgressResult r{{z}, false, z, -1};
  Point pos = z;
  auto travelled = [&] { return (pos - z).dot(dir); };
  std::optional<RayCast> next;
  for (int guard = 0; guard < 4 * t.polygon_count() + 4; ++guard) {
    const double remaining = limit ? *limit - travelled() : std::numeric_limits<double>::infinity();
    if (limit && remaining <= kEpsGeom) {
      append_polyline(r.path, {pos, target});
      r.done = true;
      r.final_point = target;
      return r;
    }
    const RayCast c = next ? *next : cast_ray(pos, dir, t, remaining);
    next.reset();
    if (c.kind == RayCast::Kind::Clear) {
      append_polyline(r.path, {pos, target});
      r.done = true;
      r.final_point = target;
      r.last_polygon = -1;
      return r;
    }
    Point hit = pos;
    PolygonId id;
    if (c.kind == RayCast::Kind::Hit) {
      hit = c.hit.point;
      id = c.hit.polygon;
      append_polyline(r.path, {pos, hit});
    } else {
      const Locus l = classify_point(pos, t);
      if (l.kind != Locus::Kind::Boundary)
        throw Error(ErrorCode::NumericFailure, "blocked progress away from any boundary");
      id = l.polygon;
    }
    const Polygon& poly = t.polygon(id);
    const Orientation o = interior_left(id);
    append_polyline(r.path, boundary_tour(hit, poly, o));
    const auto crossings =
        boundary_crossings(z, dir, poly, limit ? *limit : std::numeric_limits<double>::infinity());
    const double far = crossings.empty() ? travelled() : std::max(crossings.back(), travelled());
    const Point u = z + far * dir;
    append_polyline(r.path, boundary_walk_to(hit, u, poly, o));
    pos = u;
    r.final_point = pos;
    r.last_polygon = id;
    if (limit && *limit - far <= kEpsGeom) continue;  // target reached on a boundary
    const RayCast probe =
        cast_ray(pos, dir, t, limit ? *limit - far : std::numeric_limits<double>::infinity());
    if (probe.kind == RayCast::Kind::ExitsImmediately) {
      r.done = !limit && id == kOuter;
      if (!limit && id != kOuter)
        throw Error(ErrorCode::NumericFailure, "ray progress stuck on obstacle " + std::to_string(id));
      return r;
    }
    next = probe;
  }
  throw Error(ErrorCode::NumericFailure, "progress loop did not terminate");
}

}  // namespace

ProgressResult ray_progress_phase(const Point& start, const Vec2& direction, const Terrain& terrain) {
  return progress(start, direction.normalized(), terrain, std::nullopt, start);
}

ProgressResult segment_progress_phase(const Point& u, const Point& v, const Terrain& terrain) {
  const double len = (v - u).norm();
  if (len <= kEpsGeom) return {{u}, true, v, -1};
  ProgressResult r = progress(u, (v - u) / len, terrain, len, v);
  if (!r.done) {
    // Blocked for good: v is inside the obstacle we stand on.
    if (r.last_polygon <= kOuter || !point_in_polygon(v, terrain.polygon(r.last_polygon)))
      throw Error(ErrorCode::NumericFailure, "segment progress blocked without a containing obstacle");
  }
  return r;
}

Point north_east_corner(const Polygon& outer, double compass) {
  Point best = outer.vertex(0);
  for (const auto& p : outer.vertices())
    if (north_east_of(p, best, compass)) best = p;
  return best;
}

Route build_rvcm(const AgentConfig& me, const Point& other_start, const Terrain& terrain) {
  if (same_point(me.start, other_start)) throw Error(ErrorCode::SameStart, "agents start at the same point");
  const Point v = north_east_of(me.start, other_start, me.compass) ? me.start : other_start;
  Route r(Polyline{me.start});
  if (same_point(v, me.start)) return r;
  r.extend(unique_path(me.start, v, terrain).waypoints, "to_inert");
  return r;
}

Route build_rvm(const AgentConfig& me, const Point& other_start, const Terrain& terrain) {
  require_no_obstacles(terrain, "rvm");
  if (same_point(me.start, other_start)) throw Error(ErrorCode::SameStart, "agents start at the same point");
  const GeodesicPath p = unique_path(me.start, other_start, terrain);
  Route r(Polyline{me.start});
  r.extend(split_polyline(p.waypoints, 0.5 * p.length).first, "to_midpoint");
  return r;
}

Polyline RingEmbedding::tour(bool forward) const {
  Polyline out{v};
  if (forward) {
    for (const auto& a : arcs) append_polyline(out, a);
  } else {
    for (auto it = arcs.rbegin(); it != arcs.rend(); ++it) append_polyline(out, reversed(*it));
  }
  return out;
}

double RingEmbedding::length() const {
  double s = 0;
  for (const auto& a : arcs) s += polyline_length(a);
  return s;
}

RingEmbedding build_ring(const Point& me_start, const Point& other_start, const Terrain& terrain) {
  if (same_point(me_start, other_start)) throw Error(ErrorCode::SameStart, "agents start at the same point");
  const GeodesicPath vw = unique_path(me_start, other_start, terrain);
  const GeodesicPath wv = unique_path(other_start, me_start, terrain);
  auto [va, aw] = split_polyline(vw.waypoints, 0.5 * vw.length);
  auto [wb, bv] = split_polyline(wv.waypoints, 0.5 * wv.length);
  RingEmbedding ring;
  ring.v = me_start;
  ring.a = va.back();
  ring.w = other_start;
  ring.b = wb.back();
  ring.arcs = {va, aw, wb, bv};
  return ring;
}

Route build_rvmo(const AgentConfig& me, const Point& other_start, const Terrain& terrain,
                 std::optional<int> other_label) {
  if (other_label && *other_label == me.label) throw Error(ErrorCode::SameLabel, "agents share a label");
  const RingEmbedding ring = build_ring(me.start, other_start, terrain);
  Route r(Polyline{me.start});
  const Polyline fwd = ring.tour(true);
  const Polyline back = ring.tour(false);
  for (char bit : modified_label(me.label)) {
    const Polyline& t = bit == '1' ? fwd : back;
    r.extend(t, "ring_tours");
    r.extend(t, "ring_tours");
  }
  return r;
}

Route build_rvc(const AgentConfig& me, const Terrain& terrain) {
  const ProgressResult p = ray_progress_phase(me.start, compass_north(me.compass), terrain);
  Route r(Polyline{me.start});
  r.extend(p.path, "phase1");
  const Point target = north_east_corner(terrain.outer(), me.compass);
  const Polyline ccw = boundary_walk_to(p.final_point, target, terrain.outer(), Orientation::CounterClockwise);
  const Polyline cw = boundary_walk_to(p.final_point, target, terrain.outer(), Orientation::Clockwise);
  r.extend(polyline_length(cw) < polyline_length(ccw) - kEpsGeom ? cw : ccw, "to_corner");
  return r;
}

Route build_rv(const AgentConfig& me, const Terrain& terrain) {
  require_no_obstacles(terrain, "rv");
  const Vec2 alpha = rotate(compass_north(me.compass), me.alpha);
  const RayCast c = cast_ray(me.start, alpha, terrain);
  const Point hit = c.kind == RayCast::Kind::Hit ? c.hit.point : me.start;
  Route r(Polyline{me.start});
  r.extend({me.start, hit}, "ray");
  r.extend(boundary_tour(hit, terrain.outer(), interior_left(kOuter)), "tour");
  const Point m = medial_point(terrain.outer()).point;
  r.extend(shortest_path(hit, m, terrain).waypoints, "to_medial_point");
  return r;
}

Route build_rvo(const AgentConfig& me, const Terrain& terrain, std::optional<int> other_label) {
  if (other_label && *other_label == me.label) throw Error(ErrorCode::SameLabel, "agents share a label");
  const Vec2 alpha = rotate(compass_north(me.compass), me.alpha);
  const ProgressResult p1 = ray_progress_phase(me.start, alpha, terrain);
  Route r(Polyline{me.start});
  r.extend(p1.path, "phase1");
  const Point m = medial_point(terrain.outer()).point;
  const ProgressResult p2 = segment_progress_phase(p1.final_point, m, terrain);
  r.extend(p2.path, "phase2");
  if (p2.done) return r;

  const PolygonId id = p2.last_polygon;
  const Polygon& ob = terrain.polygon(id);
  const Point w = p2.final_point;
  Point s = w;
  bool at_vertex = false;
  for (const auto& q : ob.vertices()) at_vertex = at_vertex || same_point(q, w);
  if (!at_vertex) {
    const auto pos = locate_on_boundary(w, ob);
    if (!pos) throw Error(ErrorCode::NotOnBoundary, "phase 3 start is off the obstacle boundary");
    // Continue in the walking orientation (stored order, terrain on the left).
    s = ob.vertex(pos->edge + 1);
    r.extend(boundary_walk_to(w, s, ob, interior_left(id)), "phase3");
  }
  const Polyline cw = boundary_tour(s, ob, Orientation::Clockwise);
  const Polyline ccw = boundary_tour(s, ob, Orientation::CounterClockwise);
  for (char bit : modified_label(me.label)) {
    const Polyline& t = bit == '1' ? cw : ccw;
    r.extend(t, "phase3");
    r.extend(t, "phase3");
  }
  return r;
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "rvcm") return Algorithm::Rvcm;
  if (name == "rvm") return Algorithm::Rvm;
  if (name == "rvmo") return Algorithm::Rvmo;
  if (name == "rvc") return Algorithm::Rvc;
  if (name == "rv") return Algorithm::Rv;
  if (name == "rvo") return Algorithm::Rvo;
  throw Error(ErrorCode::ParseError, "unknown algorithm '" + name + "' (rvcm|rvm|rvmo|rvc|rv|rvo)");
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Rvcm: return "rvcm";
    case Algorithm::Rvm: return "rvm";
    case Algorithm::Rvmo: return "rvmo";
    case Algorithm::Rvc: return "rvc";
    case Algorithm::Rv: return "rv";
    case Algorithm::Rvo: return "rvo";
  }
  return "?";
}

std::pair<Route, Route> build_routes(Algorithm algo, const AgentConfig& a1, const AgentConfig& a2,
                                     const Terrain& terrain) {
  auto violation = [](const std::string& rule) { return Error(ErrorCode::PreconditionViolation, rule); };
  for (const AgentConfig* a : {&a1, &a2}) {
    if (classify_point(a->start, terrain).kind == Locus::Kind::Outside)
      throw violation("start outside the terrain");
    if (a->label < 1) throw violation("labels must be positive");
  }
  if (same_point(a1.start, a2.start)) throw violation("SameStart: agents start at the same point");
  const bool needs_map = algo == Algorithm::Rvcm || algo == Algorithm::Rvm || algo == Algorithm::Rvmo;
  if (needs_map && !(a1.has_map && a2.has_map)) throw violation(to_string(algo) + " needs a map");
  const bool coherent = std::abs(std::remainder(a1.compass - a2.compass, 2 * std::numbers::pi)) <= 1e-12;
  if ((algo == Algorithm::Rvcm || algo == Algorithm::Rvc) && !coherent)
    throw violation(to_string(algo) + " needs coherent compasses");
  if ((algo == Algorithm::Rvm || algo == Algorithm::Rv) && terrain.obstacle_count() != 0)
    throw violation("HasObstacles: " + to_string(algo) + " needs a terrain without obstacles");
  if ((algo == Algorithm::Rvmo || algo == Algorithm::Rvo) && a1.label == a2.label)
    throw violation("SameLabel: " + to_string(algo) + " needs distinct labels");
  switch (algo) {
    case Algorithm::Rvcm:
      return {build_rvcm(a1, a2.start, terrain), build_rvcm(a2, a1.start, terrain)};
    case Algorithm::Rvm:
      return {build_rvm(a1, a2.start, terrain), build_rvm(a2, a1.start, terrain)};
    case Algorithm::Rvmo:
      return {build_rvmo(a1, a2.start, terrain, a2.label), build_rvmo(a2, a1.start, terrain, a1.label)};
    case Algorithm::Rvc:
      return {build_rvc(a1, terrain), build_rvc(a2, terrain)};
    case Algorithm::Rv:
      return {build_rv(a1, terrain), build_rv(a2, terrain)};
    case Algorithm::Rvo:
      return {build_rvo(a1, terrain, a2.label), build_rvo(a2, terrain, a1.label)};
  }
  throw violation("unknown algorithm");
}

}  // namespace rdv
