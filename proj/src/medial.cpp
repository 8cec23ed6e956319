#include "rdv/medial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace rdv {

namespace {

struct SiteGeom {
  MedialSite site;
  // Edge data.
  Point a;
  Vec2 dir;
  Vec2 n;  // inward normal
  double c = 0;
  double len = 0;
  // Vertex data.
  Point r;
};

struct Context {
  Polygon poly;
  std::vector<SiteGeom> sites;
  std::vector<bool> reflex;
  double tol;
  double scale;
};

bool is_edge(const SiteGeom& s) { return s.site.kind == MedialSite::Kind::Edge; }

// Vertex r is an endpoint of edge e.
bool own_endpoint(const Context& ctx, const SiteGeom& e, const SiteGeom& v) {
  const std::size_t n = ctx.poly.size();
  return v.site.index == e.site.index || v.site.index == (e.site.index + 1) % n;
}

std::string site_name(const MedialSite& s) {
  return (s.kind == MedialSite::Kind::Edge ? "edge " : "vertex ") + std::to_string(s.index);
}

// Distance from p to the site, or nullopt when p is outside the site's
// perpendicular strip (edges only).
std::optional<double> site_distance(const SiteGeom& s, const Point& p, double tol) {
  if (!is_edge(s)) return (p - s.r).norm();
  const double t = (p - s.a).dot(s.dir);
  if (t < -tol || t > s.len + tol) return std::nullopt;
  const double h = s.n.dot(p - s.a);
  if (h < -tol) return std::nullopt;
  return h;
}

bool on_axis_with(const Context& ctx, const Point& p, double d, std::initializer_list<const SiteGeom*> sites) {
  if (d <= ctx.tol) return false;
  for (const SiteGeom* s : sites) {
    const auto ds = site_distance(*s, p, ctx.tol);
    if (!ds || std::abs(*ds - d) > ctx.tol) return false;
  }
  if (std::abs(distance_to_boundary(p, ctx.poly) - d) > ctx.tol) return false;
  return point_in_polygon(p, ctx.poly);
}

Context make_context(const Polygon& input) {
  Context ctx;
  ctx.poly = input.orientation() == Orientation::CounterClockwise ? input : input.reversed();
  const auto& v = ctx.poly.vertices();
  const std::size_t n = v.size();
  Eigen::AlignedBox2d box;
  for (const auto& p : v) box.extend(p);
  ctx.scale = std::max(1.0, box.diagonal().norm());
  ctx.tol = kEpsMed * ctx.scale;
  ctx.reflex.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const Segment e = ctx.poly.edge(i);
    SiteGeom s;
    s.site = {MedialSite::Kind::Edge, i};
    s.a = e.a;
    s.len = e.length();
    s.dir = e.direction();
    s.n = perp(s.dir);
    s.c = s.n.dot(s.a);
    ctx.sites.push_back(s);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point& prev = ctx.poly.vertex(i + n - 1);
    const Point& cur = ctx.poly.vertex(i);
    const Point& next = ctx.poly.vertex(i + 1);
    if (cross(cur - prev, next - cur) < 0) {
      ctx.reflex[i] = true;
      SiteGeom s;
      s.site = {MedialSite::Kind::Vertex, i};
      s.r = cur;
      ctx.sites.push_back(s);
    }
  }
  return ctx;
}

struct Candidate {
  Point p;
  double d;
};

// Equidistant points for a triple whose members include an edge e and its
// own endpoint r: p = r + s n with d = s, intersected with the third site.
std::vector<Candidate> solve_junction(const SiteGeom& e, const SiteGeom& r, const SiteGeom& x) {
  if (is_edge(x)) {
    const double k = x.n.dot(e.n) - 1;
    if (std::abs(k) < 1e-14) return {};
    const double s = (x.c - x.n.dot(r.r)) / k;
    return {{r.r + s * e.n, s}};
  }
  const Vec2 q = r.r - x.r;
  const double denom = 2 * e.n.dot(q);
  if (std::abs(denom) < 1e-14) return {};
  const double s = -q.squaredNorm() / denom;
  return {{r.r + s * e.n, s}};
}

std::vector<Candidate> solve_general(const std::array<const SiteGeom*, 3>& t) {
  std::vector<Eigen::Vector3d> rows;
  std::vector<double> rhs;
  const SiteGeom* anchor = nullptr;
  for (const SiteGeom* s : t) {
    if (is_edge(*s)) {
      rows.emplace_back(s->n.x(), s->n.y(), -1.0);
      rhs.push_back(s->c);
    } else if (!anchor) {
      anchor = s;
    } else {
      const Vec2 g = 2 * (s->r - anchor->r);
      rows.emplace_back(g.x(), g.y(), 0.0);
      rhs.push_back(s->r.squaredNorm() - anchor->r.squaredNorm());
    }
  }
  if (!anchor) {
    Eigen::Matrix3d A;
    A << rows[0].transpose(), rows[1].transpose(), rows[2].transpose();
    if (std::abs(A.determinant()) < 1e-12) return {};
    const Eigen::Vector3d x = A.partialPivLu().solve(Eigen::Vector3d(rhs[0], rhs[1], rhs[2]));
    return {{x.head<2>(), x.z()}};
  }
  // Two linear rows: a line of solutions x0 + s k, then the quadratic.
  Eigen::Matrix<double, 2, 3> A;
  A << rows[0].transpose(), rows[1].transpose();
  const Eigen::Vector3d k = rows[0].cross(rows[1]);
  if (k.norm() < 1e-12) return {};
  const Eigen::Matrix2d AAt = A * A.transpose();
  const Eigen::Vector3d x0 = A.transpose() * AAt.inverse() * Eigen::Vector2d(rhs[0], rhs[1]);
  const Vec2 kp = k.head<2>();
  const Vec2 q = x0.head<2>() - anchor->r;
  const double qa = kp.squaredNorm() - k.z() * k.z();
  const double qb = 2 * (kp.dot(q) - k.z() * x0.z());
  const double qc = q.squaredNorm() - x0.z() * x0.z();
  std::vector<double> roots;
  if (std::abs(qa) < 1e-14 * std::max(1.0, std::abs(qb))) {
    if (std::abs(qb) > 1e-14) roots.push_back(-qc / qb);
  } else {
    const double disc = qb * qb - 4 * qa * qc;
    if (disc < 0) {
      // Near-tangent: keep the vertex of the quadratic.
      if (disc > -1e-12 * qb * qb) roots.push_back(-qb / (2 * qa));
    } else {
      const double sq = std::sqrt(disc);
      const double r1 = (-qb - std::copysign(sq, qb)) / (2 * qa);
      roots.push_back(r1);
      if (r1 != 0) roots.push_back(qc / (qa * r1));
    }
  }
  std::vector<Candidate> out;
  for (double s : roots) out.push_back({x0.head<2>() + s * kp, x0.z() + s * k.z()});
  return out;
}

std::vector<Candidate> solve_triple(const Context& ctx, const std::array<const SiteGeom*, 3>& t) {
  for (int i = 0; i < 3; ++i) {
    if (!is_edge(*t[i])) continue;
    for (int j = 0; j < 3; ++j) {
      if (is_edge(*t[j]) || !own_endpoint(ctx, *t[i], *t[j])) continue;
      return solve_junction(*t[i], *t[j], *t[3 - i - j]);
    }
  }
  return solve_general(t);
}

// Bisector curve of a site pair.
struct Bisector {
  MedialEdge::Kind kind;
  Point origin;
  Vec2 dir;
  Vec2 normal = Vec2::Zero();
  double focus_tau = 0;
  double focus_height = 0;
};

std::optional<Bisector> make_bisector(const Context& ctx, const SiteGeom& s1, const SiteGeom& s2) {
  if (is_edge(s1) && is_edge(s2)) {
    const Vec2 m = s1.n - s2.n;
    if (m.norm() < 1e-12) return std::nullopt;
    const double off = s1.c - s2.c;
    return Bisector{MedialEdge::Kind::Segment, m * off / m.squaredNorm(), perp(m).normalized()};
  }
  if (!is_edge(s1) && !is_edge(s2)) {
    const Vec2 g = s2.r - s1.r;
    return Bisector{MedialEdge::Kind::Segment, 0.5 * (s1.r + s2.r), perp(g).normalized()};
  }
  const SiteGeom& e = is_edge(s1) ? s1 : s2;
  const SiteGeom& v = is_edge(s1) ? s2 : s1;
  const double hf = e.n.dot(v.r) - e.c;
  if (hf <= ctx.tol) return std::nullopt;
  Bisector b{MedialEdge::Kind::Parabola, e.a, e.dir, e.n};
  b.focus_tau = (v.r - e.a).dot(e.dir);
  b.focus_height = hf;
  return b;
}

double tau_of(const Bisector& b, const Point& p) { return (p - b.origin).dot(b.dir); }

MedialEdge make_edge(const Bisector& b, std::size_t from, std::size_t to, double t0, double t1, MedialSite sa,
                     MedialSite sb) {
  MedialEdge e;
  e.kind = b.kind;
  e.from = from;
  e.to = to;
  e.site_a = sa;
  e.site_b = sb;
  e.origin = b.origin;
  e.dir = b.dir;
  e.normal = b.normal;
  e.focus_tau = b.focus_tau;
  e.focus_height = b.focus_height;
  e.tau_from = t0;
  e.tau_to = t1;
  e.length = e.length_to(t1);
  return e;
}

bool has_site(const MedialNode& n, const MedialSite& s) {
  return std::find(n.sites.begin(), n.sites.end(), s) != n.sites.end();
}

// Pairs whose bisector never carries axis pieces.
bool excluded_pair(const Context& ctx, const SiteGeom& s1, const SiteGeom& s2) {
  const std::size_t n = ctx.poly.size();
  if (is_edge(s1) && !is_edge(s2)) return own_endpoint(ctx, s1, s2);
  if (!is_edge(s1) && is_edge(s2)) return own_endpoint(ctx, s2, s1);
  if (is_edge(s1) && is_edge(s2)) {
    const std::size_t i = s1.site.index, j = s2.site.index;
    if ((i + 1) % n == j) return ctx.reflex[j];
    if ((j + 1) % n == i) return ctx.reflex[i];
  }
  return false;
}

void check_tree(const MedialAxisGraph& g, const std::string& detail) {
  const std::size_t n = g.nodes.size();
  if (n == 0 || g.edges.size() + 1 != n)
    throw Error(ErrorCode::NumericFailure, "medial axis has " + std::to_string(n) + " nodes and " +
                                               std::to_string(g.edges.size()) + " edges; not a tree" + detail);
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : g.edges) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t w : adj[u]) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
    }
  }
  if (count != n) throw Error(ErrorCode::NumericFailure, "medial axis is disconnected" + detail);
}

}  // namespace

Point MedialEdge::at_tau(double tau) const {
  if (kind == Kind::Segment) return origin + tau * dir;
  const double x = tau - focus_tau;
  const double h = (x * x + focus_height * focus_height) / (2 * focus_height);
  return origin + tau * dir + h * normal;
}

double MedialEdge::length_to(double tau) const {
  if (kind == Kind::Segment) return std::abs(tau - tau_from);
  // Closed-form arc length of y = (x^2 + h^2) / (2h).
  auto F = [&](double t) {
    const double u = (t - focus_tau) / focus_height;
    return 0.5 * focus_height * (u * std::sqrt(1 + u * u) + std::asinh(u));
  };
  return std::abs(F(tau) - F(tau_from));
}

Point MedialEdge::at(double s) const {
  s = std::clamp(s, 0.0, length);
  if (kind == Kind::Segment) return at_tau(tau_from + (tau_to > tau_from ? s : -s));
  double lo = std::min(tau_from, tau_to), hi = std::max(tau_from, tau_to);
  const bool forward = tau_to > tau_from;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool before = length_to(mid) < s;
    if (before == forward) lo = mid;
    else hi = mid;
  }
  return at_tau(0.5 * (lo + hi));
}

MedialAxisGraph medial_axis(const Polygon& input) {
  if (input.size() < 3) throw Error(ErrorCode::InvalidTerrain, "medial axis needs at least 3 vertices");
  const Context ctx = make_context(input);
  const std::size_t ns = ctx.sites.size();
  MedialAxisGraph g;

  auto add_node = [&](const Point& p, double d, std::initializer_list<MedialSite> sites) {
    for (auto& node : g.nodes) {
      if ((node.point - p).norm() <= ctx.tol) {
        for (const auto& s : sites)
          if (!has_site(node, s)) node.sites.push_back(s);
        return;
      }
    }
    g.nodes.push_back({p, d, sites});
  };

  // Convex vertices are leaves.
  const std::size_t nv = ctx.poly.size();
  for (std::size_t i = 0; i < nv; ++i) {
    if (ctx.reflex[i]) continue;
    add_node(ctx.poly.vertex(i), 0.0,
             {MedialSite{MedialSite::Kind::Edge, (i + nv - 1) % nv}, MedialSite{MedialSite::Kind::Edge, i}});
  }

  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = i + 1; j < ns; ++j)
      for (std::size_t k = j + 1; k < ns; ++k) {
        const std::array<const SiteGeom*, 3> t{&ctx.sites[i], &ctx.sites[j], &ctx.sites[k]};
        for (const auto& c : solve_triple(ctx, t)) {
          if (!on_axis_with(ctx, c.p, c.d, {t[0], t[1], t[2]})) continue;
          add_node(c.p, c.d, {t[0]->site, t[1]->site, t[2]->site});
        }
      }

  std::set<std::pair<std::size_t, std::size_t>> linked;
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = i + 1; j < ns; ++j) {
      const SiteGeom& s1 = ctx.sites[i];
      const SiteGeom& s2 = ctx.sites[j];
      if (excluded_pair(ctx, s1, s2)) continue;
      std::vector<std::size_t> on;
      for (std::size_t n = 0; n < g.nodes.size(); ++n)
        if (has_site(g.nodes[n], s1.site) && has_site(g.nodes[n], s2.site)) on.push_back(n);
      if (on.size() < 2) continue;
      const auto bis = make_bisector(ctx, s1, s2);
      if (!bis) continue;
      std::vector<std::pair<double, std::size_t>> ordered;
      for (std::size_t n : on) ordered.emplace_back(tau_of(*bis, g.nodes[n].point), n);
      std::sort(ordered.begin(), ordered.end());
      for (std::size_t q = 0; q + 1 < ordered.size(); ++q) {
        const auto [t0, n0] = ordered[q];
        const auto [t1, n1] = ordered[q + 1];
        if (t1 - t0 <= ctx.tol) continue;
        MedialEdge e = make_edge(*bis, n0, n1, t0, t1, s1.site, s2.site);
        bool valid = true;
        for (int sample = 1; sample <= 7 && valid; ++sample) {
          const double tau = t0 + (t1 - t0) * sample / 8.0;
          const Point p = e.at_tau(tau);
          const auto d = site_distance(s1, p, ctx.tol);
          valid = d && on_axis_with(ctx, p, *d, {&s1, &s2});
        }
        if (!valid) continue;
        const auto key = std::minmax(n0, n1);
        if (linked.insert(key).second) g.edges.push_back(e);
      }
    }
  }

  std::string detail;
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    std::size_t deg = 0;
    for (const auto& e : g.edges) deg += (e.from == n) + (e.to == n);
    if (deg != 0) continue;
    detail += "; isolated node at (" + std::to_string(g.nodes[n].point.x()) + ", " +
              std::to_string(g.nodes[n].point.y()) + ") sites";
    for (const auto& s : g.nodes[n].sites) detail += " [" + site_name(s) + "]";
  }
  check_tree(g, detail);
  return g;
}

namespace {

struct Chain {
  std::size_t a;
  std::size_t b;
  std::vector<std::pair<std::size_t, bool>> pieces;  // edge index, traversed from->to
  double length = 0;
};

struct Center {
  bool is_node;
  std::size_t node;
  std::size_t chain;
};

// Graph center of the contracted tree by simultaneous leaf pruning; `order`
// controls the visiting order only.
Center tree_center(std::size_t key_count, const std::vector<Chain>& chains, bool reversed) {
  std::vector<std::vector<std::size_t>> inc(key_count);
  for (std::size_t c = 0; c < chains.size(); ++c) {
    inc[chains[c].a].push_back(c);
    inc[chains[c].b].push_back(c);
  }
  std::vector<std::size_t> degree(key_count);
  for (std::size_t k = 0; k < key_count; ++k) degree[k] = inc[k].size();
  std::vector<bool> alive(key_count, true);
  std::size_t remaining = key_count;
  std::vector<std::size_t> order(key_count);
  for (std::size_t k = 0; k < key_count; ++k) order[k] = reversed ? key_count - 1 - k : k;
  while (remaining > 2) {
    std::vector<std::size_t> leaves;
    for (std::size_t k : order)
      if (alive[k] && degree[k] <= 1) leaves.push_back(k);
    for (std::size_t k : leaves) {
      alive[k] = false;
      --remaining;
      for (std::size_t c : inc[k]) {
        const std::size_t other = chains[c].a == k ? chains[c].b : chains[c].a;
        if (alive[other]) --degree[other];
      }
    }
  }
  std::vector<std::size_t> left;
  for (std::size_t k : order)
    if (alive[k]) left.push_back(k);
  if (left.size() == 1) return {true, left[0], 0};
  std::sort(left.begin(), left.end());
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const auto ends = std::minmax(chains[c].a, chains[c].b);
    if (ends.first == left[0] && ends.second == left[1]) return {false, 0, c};
  }
  throw Error(ErrorCode::NumericFailure, "tree center pruning ended on two unlinked nodes");
}

}  // namespace

MedialPoint medial_point(const MedialAxisGraph& axis) {
  const std::size_t n = axis.nodes.size();
  for (const auto& e : axis.edges)
    if (e.length < 10 * kEpsMed)
      throw Error(ErrorCode::NumericFailure, "near-degenerate medial axis: piece between " + site_name(e.site_a) +
                                                 " and " + site_name(e.site_b) + " has length " +
                                                 std::to_string(e.length));
  std::vector<std::vector<std::size_t>> inc(n);
  for (std::size_t i = 0; i < axis.edges.size(); ++i) {
    inc[axis.edges[i].from].push_back(i);
    inc[axis.edges[i].to].push_back(i);
  }
  // Key nodes: degree other than 2.
  std::vector<long> key(n, -1);
  std::vector<std::size_t> keys;
  for (std::size_t v = 0; v < n; ++v) {
    if (inc[v].size() != 2) {
      key[v] = static_cast<long>(keys.size());
      keys.push_back(v);
    }
  }
  if (keys.empty()) throw Error(ErrorCode::NumericFailure, "medial axis has no leaves");
  std::vector<Chain> chains;
  std::vector<bool> used(axis.edges.size(), false);
  for (std::size_t k : keys) {
    for (std::size_t first : inc[k]) {
      if (used[first]) continue;
      Chain ch;
      ch.a = static_cast<std::size_t>(key[k]);
      std::size_t cur = k;
      std::size_t e = first;
      while (true) {
        used[e] = true;
        const bool fwd = axis.edges[e].from == cur;
        ch.pieces.emplace_back(e, fwd);
        ch.length += axis.edges[e].length;
        cur = fwd ? axis.edges[e].to : axis.edges[e].from;
        if (key[cur] >= 0) break;
        e = inc[cur][0] == e ? inc[cur][1] : inc[cur][0];
      }
      ch.b = static_cast<std::size_t>(key[cur]);
      chains.push_back(std::move(ch));
    }
  }

  const Center c = tree_center(keys.size(), chains, false);
  const Center again = tree_center(keys.size(), chains, true);
  if (c.is_node != again.is_node || c.node != again.node || c.chain != again.chain)
    throw Error(ErrorCode::NumericFailure, "tree center depends on node order");
  if (c.is_node) return {axis.nodes[keys[c.node]].point, MedialPoint::Provenance::CentralNode};

  const Chain& ch = chains[c.chain];
  double s = 0.5 * ch.length;
  for (const auto& [ei, fwd] : ch.pieces) {
    const MedialEdge& e = axis.edges[ei];
    if (s <= e.length) return {e.at(fwd ? s : e.length - s), MedialPoint::Provenance::MiddleOfCentralEdge};
    s -= e.length;
  }
  const auto& [ei, fwd] = ch.pieces.back();
  const MedialEdge& e = axis.edges[ei];
  return {e.at(fwd ? e.length : 0), MedialPoint::Provenance::MiddleOfCentralEdge};
}

MedialPoint medial_point(const Polygon& poly) { return medial_point(medial_axis(poly)); }

nlohmann::ordered_json medial_to_json(const MedialAxisGraph& axis) {
  using J = nlohmann::ordered_json;
  auto pt = [](const Point& p) { return J::array({p.x(), p.y()}); };
  auto site = [](const MedialSite& s) {
    return J{{"kind", s.kind == MedialSite::Kind::Edge ? "edge" : "vertex"}, {"index", s.index}};
  };
  J nodes = J::array();
  for (const auto& n : axis.nodes) {
    J sites = J::array();
    for (const auto& s : n.sites) sites.push_back(site(s));
    nodes.push_back(J{{"point", pt(n.point)}, {"radius", n.radius}, {"sites", sites}});
  }
  J edges = J::array();
  for (const auto& e : axis.edges) {
    edges.push_back(J{{"type", e.kind == MedialEdge::Kind::Segment ? "segment" : "parabola"},
                      {"from", pt(axis.nodes[e.from].point)},
                      {"to", pt(axis.nodes[e.to].point)},
                      {"sites", J::array({site(e.site_a), site(e.site_b)})},
                      {"arc_length", e.length}});
  }
  return J{{"nodes", nodes}, {"edges", edges}};
}

}  // namespace rdv
