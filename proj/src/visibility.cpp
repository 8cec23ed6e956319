#include "rdv/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace rdv {

namespace {

Point snap_to_terrain(const Point& p, const Terrain& t) {
  const Locus l = classify_point(p, t);
  return l.kind == Locus::Kind::Boundary ? l.snapped : p;
}

std::vector<double> dijkstra(const VisibilityGraph& g, std::size_t src) {
  std::vector<double> dist(g.nodes.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const auto& e : g.adjacency[u]) {
      if (d + e.length < dist[e.to]) {
        dist[e.to] = d + e.length;
        pq.emplace(dist[e.to], e.to);
      }
    }
  }
  return dist;
}

GeodesicPath to_geodesic(const VisibilityGraph& g, const std::vector<std::size_t>& nodes) {
  GeodesicPath path;
  for (std::size_t n : nodes) path.waypoints.push_back(g.nodes[n]);
  path.length = polyline_length(path.waypoints);
  return path;
}

}  // namespace

VisibilityGraph build_visibility_graph(const Terrain& t, std::span<const Point> extra,
                                       std::vector<std::size_t>* extra_index) {
  VisibilityGraph g;
  for (PolygonId id = 0; id < t.polygon_count(); ++id)
    for (const auto& v : t.polygon(id).vertices()) g.nodes.push_back(v);
  std::vector<std::size_t> idx;
  for (const auto& raw : extra) {
    const Point p = snap_to_terrain(raw, t);
    std::size_t found = g.nodes.size();
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      if ((g.nodes[i] - p).norm() <= kEpsGeom) {
        found = i;
        break;
      }
    }
    if (found == g.nodes.size()) g.nodes.push_back(p);
    idx.push_back(found);
  }
  if (extra_index) *extra_index = idx;

  const std::size_t n = g.nodes.size();
  g.adjacency.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point& a = g.nodes[i];
      const Point& b = g.nodes[j];
      bool through_node = false;
      for (std::size_t k = 0; k < n && !through_node; ++k) {
        if (k == i || k == j) continue;
        through_node = distance_to_segment(g.nodes[k], a, b) <= kEpsGeom;
      }
      if (through_node || !segment_in_terrain(a, b, t)) continue;
      const double len = (b - a).norm();
      g.adjacency[i].push_back({j, len});
      g.adjacency[j].push_back({i, len});
    }
  }
  return g;
}

ShortestPathDAG shortest_path_dag(const Point& s, const Point& t, const Terrain& terrain) {
  ShortestPathDAG dag;
  const Point ends[2] = {s, t};
  std::vector<std::size_t> idx;
  dag.graph = build_visibility_graph(terrain, ends, &idx);
  dag.source = idx[0];
  dag.sink = idx[1];
  dag.dist = dijkstra(dag.graph, dag.source);
  dag.dist_to_sink = dijkstra(dag.graph, dag.sink);
  const double total = dag.dist[dag.sink];
  if (!std::isfinite(total))
    throw Error(ErrorCode::Unreachable, "no path between the query points in the visibility graph");
  const double tol = kEpsTie * std::max(total, 1e-3);
  dag.tight.assign(dag.graph.nodes.size(), {});
  for (std::size_t u = 0; u < dag.graph.nodes.size(); ++u) {
    if (!std::isfinite(dag.dist[u]) || u == dag.sink) continue;
    for (const auto& e : dag.graph.adjacency[u]) {
      const double via = dag.dist[u] + e.length;
      if (via + dag.dist_to_sink[e.to] <= total + tol && via <= dag.dist[e.to] + tol &&
          dag.dist[e.to] > dag.dist[u])
        dag.tight[u].push_back(e.to);
    }
  }
  return dag;
}

GeodesicPath shortest_path(const Point& s, const Point& t, const Terrain& terrain) {
  const ShortestPathDAG dag = shortest_path_dag(s, t, terrain);
  if (dag.source == dag.sink) return {{dag.graph.nodes[dag.source]}, 0};
  // Any tight chain is a shortest path; follow the first successor.
  std::vector<std::size_t> nodes{dag.source};
  while (nodes.back() != dag.sink) {
    const auto& next = dag.tight[nodes.back()];
    if (next.empty()) throw Error(ErrorCode::Unreachable, "broken shortest-path DAG");
    nodes.push_back(next.front());
  }
  return to_geodesic(dag.graph, nodes);
}

std::vector<std::vector<std::size_t>> enumerate_node_paths(const ShortestPathDAG& dag,
                                                           std::size_t cap) {
  std::vector<std::vector<std::size_t>> out;
  if (dag.source == dag.sink) return {{dag.source}};
  std::vector<std::size_t> stack{dag.source};
  // Depth-first over tight edges; every maximal chain ends at the sink.
  auto dfs = [&](auto&& self, std::size_t u) -> void {
    if (u == dag.sink) {
      if (out.size() >= cap)
        throw Error(ErrorCode::TooManyPaths, "more than " + std::to_string(cap) + " tied shortest paths");
      out.push_back(stack);
      return;
    }
    for (std::size_t w : dag.tight[u]) {
      stack.push_back(w);
      self(self, w);
      stack.pop_back();
    }
  };
  dfs(dfs, dag.source);
  return out;
}

std::vector<GeodesicPath> enumerate_shortest_paths(const ShortestPathDAG& dag, std::size_t cap) {
  std::vector<GeodesicPath> out;
  for (const auto& nodes : enumerate_node_paths(dag, cap)) out.push_back(to_geodesic(dag.graph, nodes));
  return out;
}

double clockwise_angle(const Vec2& base, const Vec2& v) {
  double a = std::atan2(-cross(base, v), base.dot(v));
  if (a < 0) a += 2 * std::numbers::pi;
  if (a >= 2 * std::numbers::pi) a = 0;
  return a;
}

std::size_t clockwise_first(const Vec2& base, std::span<const Vec2> candidates) {
  constexpr double kAngularTol = 1e-9;
  std::size_t best = 0;
  double best_angle = std::numeric_limits<double>::infinity();
  double runner_up = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double a = clockwise_angle(base, candidates[i]);
    // Snap a hair below 2pi onto 0: the candidate is the base direction.
    if (2 * std::numbers::pi - a <= kAngularTol) a = 0;
    if (a < best_angle) {
      runner_up = best_angle;
      best_angle = a;
      best = i;
    } else if (a < runner_up) {
      runner_up = a;
    }
  }
  if (runner_up - best_angle <= kAngularTol)
    throw Error(ErrorCode::AmbiguousTie, "two continuation directions coincide within 1e-9 rad");
  return best;
}

GeodesicPath unique_path(const Point& v, const Point& w, const Terrain& terrain) {
  const ShortestPathDAG dag = shortest_path_dag(v, w, terrain);
  const auto paths = enumerate_node_paths(dag);
  const auto& nodes = dag.graph.nodes;
  const Vec2 base = (nodes[dag.sink] - nodes[dag.source]).normalized();

  std::vector<std::size_t> out{dag.source};
  std::size_t u = dag.source;
  while (u != dag.sink) {
    // Survivors: paths through u, with the position of u in each.
    std::vector<std::pair<std::size_t, std::size_t>> through;
    for (std::size_t p = 0; p < paths.size(); ++p) {
      const auto it = std::find(paths[p].begin(), paths[p].end(), u);
      if (it != paths[p].end()) through.emplace_back(p, static_cast<std::size_t>(it - paths[p].begin()));
    }
    std::vector<std::size_t> next_nodes;
    for (const auto& [p, at] : through) {
      const std::size_t nx = paths[p][at + 1];
      if (std::find(next_nodes.begin(), next_nodes.end(), nx) == next_nodes.end()) next_nodes.push_back(nx);
    }
    std::vector<Vec2> dirs;
    for (std::size_t nx : next_nodes) dirs.push_back((nodes[nx] - nodes[u]).normalized());
    const std::size_t chosen = next_nodes[clockwise_first(base, dirs)];

    std::vector<std::pair<std::size_t, std::size_t>> kept;
    for (const auto& [p, at] : through)
      if (paths[p][at + 1] == chosen) kept.emplace_back(p, at);
    // Extend by the common prefix of the kept suffixes.
    std::size_t step = 1;
    while (true) {
      const auto& [p0, at0] = kept.front();
      if (at0 + step >= paths[p0].size()) break;
      const std::size_t cand = paths[p0][at0 + step];
      bool common = true;
      for (const auto& [p, at] : kept) {
        if (at + step >= paths[p].size() || paths[p][at + step] != cand) {
          common = false;
          break;
        }
      }
      if (!common) break;
      out.push_back(cand);
      ++step;
    }
    u = out.back();
  }
  return to_geodesic(dag.graph, out);
}

}  // namespace rdv
