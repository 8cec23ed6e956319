#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rdv/geometry.hpp"

namespace rdv {

/// Relative tolerance under which two path lengths count as equal.
inline constexpr double kEpsTie = 1e-9;
/// Upper bound on tied shortest paths handled by enumeration.
inline constexpr std::size_t kPathCap = 64;

struct VisibilityGraph {
  struct Edge {
    std::size_t to;
    double length;
  };
  /// All polygon vertices, followed by the extra query points that do not
  /// coincide with a vertex.
  std::vector<Point> nodes;
  std::vector<std::vector<Edge>> adjacency;
};

/// Builds the visibility graph over every terrain vertex plus `extra`
/// (snapped to the boundary when within kEpsGeom). `extra_index[i]` receives
/// the node index of extra[i]. Edges are straight segments in the closed
/// terrain that do not pass through a third node.
VisibilityGraph build_visibility_graph(const Terrain& t, std::span<const Point> extra,
                                       std::vector<std::size_t>* extra_index = nullptr);

struct GeodesicPath {
  std::vector<Point> waypoints;
  double length = 0;
};

/// Tight-edge subgraph of all shortest source -> sink paths.
struct ShortestPathDAG {
  VisibilityGraph graph;
  std::size_t source = 0;
  std::size_t sink = 0;
  std::vector<double> dist;          // from source
  std::vector<double> dist_to_sink;  // to sink
  /// tight[u] lists successors w with dist(u) + |uw| = dist(w) on a
  /// source -> sink shortest path.
  std::vector<std::vector<std::size_t>> tight;

  double length() const { return dist[sink]; }
};

ShortestPathDAG shortest_path_dag(const Point& s, const Point& t, const Terrain& terrain);

GeodesicPath shortest_path(const Point& s, const Point& t, const Terrain& terrain);

/// Node sequences of every shortest path. Throws TooManyPaths above cap.
std::vector<std::vector<std::size_t>> enumerate_node_paths(const ShortestPathDAG& dag,
                                                           std::size_t cap = kPathCap);
std::vector<GeodesicPath> enumerate_shortest_paths(const ShortestPathDAG& dag,
                                                   std::size_t cap = kPathCap);

/// Clockwise angle in [0, 2pi) that takes `base` onto `v`.
double clockwise_angle(const Vec2& base, const Vec2& v);

/// Index of the candidate met first when sweeping clockwise from base; a
/// candidate equal to base has angle 0 and wins. Throws AmbiguousTie when
/// the two best candidates are within 1e-9 rad.
std::size_t clockwise_first(const Vec2& base, std::span<const Vec2> candidates);

/// Canonical shortest path from v to w: a function of (v, w, terrain) alone.
/// At each reached point u the clockwise-first continuation from direction
/// vw is kept, and the path grows by the common prefix of those survivors.
GeodesicPath unique_path(const Point& v, const Point& w, const Terrain& terrain);

}  // namespace rdv
