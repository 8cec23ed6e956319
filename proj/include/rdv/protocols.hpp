#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rdv/geometry.hpp"
#include "rdv/visibility.hpp"

namespace rdv {

struct AgentConfig {
  Point start = Point::Zero();
  int label = 1;
  /// CCW rotation of the agent's North from world +y, in radians.
  double compass = 0;
  bool has_map = true;
  /// Half-line choice for RV/RVO: CCW offset from the agent's North.
  double alpha = 0;
};

/// Agent's North and East in world coordinates.
Vec2 compass_north(double compass);
Vec2 compass_east(double compass);

struct RoutePhase {
  std::string name;
  double length;
};

/// Finite chain of route segments. An empty route keeps the agent at start.
class Route {
 public:
  Route() = default;
  /// Consecutive duplicate points (within kEpsGeom) are merged.
  explicit Route(const Polyline& waypoints);

  const Polyline& waypoints() const { return waypoints_; }
  std::size_t segment_count() const { return waypoints_.size() < 2 ? 0 : waypoints_.size() - 1; }
  Segment segment(std::size_t i) const { return {waypoints_[i], waypoints_[i + 1]}; }
  double length() const;
  Point start() const { return waypoints_.front(); }
  Point end() const { return waypoints_.back(); }

  /// Appends a polyline that must start where the route ends, and records
  /// its length under `phase`.
  void extend(const Polyline& tail, const std::string& phase);
  const std::vector<RoutePhase>& phases() const { return phases_; }

 private:
  Polyline waypoints_;
  std::vector<RoutePhase> phases_;
};

/// Binary representation of mu, a 1, then |mu| zeros, as '0'/'1' characters.
std::string modified_label(int mu);

Route build_rvcm(const AgentConfig& me, const Point& other_start, const Terrain& terrain);
Route build_rvm(const AgentConfig& me, const Point& other_start, const Terrain& terrain);

/// Four-node ring v -> a -> w -> b -> v, with v the caller's own start.
struct RingEmbedding {
  Point v, a, w, b;
  /// arcs[0] = v..a, arcs[1] = a..w, arcs[2] = w..b, arcs[3] = b..v.
  std::vector<Polyline> arcs;

  /// Closed walk once around the ring from v in forward (v->a->w->b) or
  /// reverse order.
  Polyline tour(bool forward) const;
  double length() const;
};

RingEmbedding build_ring(const Point& me_start, const Point& other_start, const Terrain& terrain);

/// Throws SameLabel when other_label equals me.label.
Route build_rvmo(const AgentConfig& me, const Point& other_start, const Terrain& terrain,
                 std::optional<int> other_label = std::nullopt);

struct ProgressResult {
  Polyline path;
  /// Ray phase: progress became impossible on P0. Segment phase: the target
  /// was reached.
  bool done;
  Point final_point;
  /// Polygon whose boundary the agent stands on at the end (-1 if none).
  PolygonId last_polygon = -1;
};

/// Follows the half-line from start, touring every polygon it hits and
/// resuming from the farthest point of that polygon on the half-line.
ProgressResult ray_progress_phase(const Point& start, const Vec2& direction, const Terrain& terrain);

/// Same loop along the segment [u, v]. done == false means v lies inside the
/// obstacle `last_polygon`.
ProgressResult segment_progress_phase(const Point& u, const Point& v, const Terrain& terrain);

Route build_rvc(const AgentConfig& me, const Terrain& terrain);
Route build_rv(const AgentConfig& me, const Terrain& terrain);
Route build_rvo(const AgentConfig& me, const Terrain& terrain, std::optional<int> other_label = std::nullopt);

/// Easternmost of the northernmost vertices of P0 for the given compass.
Point north_east_corner(const Polygon& outer, double compass);

enum class Algorithm { Rvcm, Rvm, Rvmo, Rvc, Rv, Rvo };
Algorithm parse_algorithm(const std::string& name);
std::string to_string(Algorithm a);

/// Builds both agents' routes, enforcing each algorithm's preconditions
/// (PreconditionViolation naming the rule otherwise).
std::pair<Route, Route> build_routes(Algorithm algo, const AgentConfig& a1, const AgentConfig& a2,
                                     const Terrain& terrain);

}  // namespace rdv
