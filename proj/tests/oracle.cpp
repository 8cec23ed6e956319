#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

namespace {

double seg_dist(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  double t = (p - a).dot(ab) / ab.squaredNorm();
  t = std::max(0.0, std::min(1.0, t));
  return (a + t * ab - p).norm();
}

int winding(const Point& p, const rdv::Polygon& poly) {
  int w = 0;
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    const double side = (b.x() - a.x()) * (p.y() - a.y()) - (p.x() - a.x()) * (b.y() - a.y());
    if (a.y() <= p.y()) {
      if (b.y() > p.y() && side > 0) ++w;
    } else {
      if (b.y() <= p.y() && side < 0) --w;
    }
  }
  return w;
}

double boundary_dist(const Point& p, const rdv::Polygon& poly) {
  double best = 1e300;
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) best = std::min(best, seg_dist(p, v[i], v[(i + 1) % v.size()]));
  return best;
}

std::vector<Point> simplify(const std::vector<Point>& pts) {
  std::vector<Point> out;
  for (const auto& p : pts) {
    if (!out.empty() && (out.back() - p).norm() < 1e-12) continue;
    out.push_back(p);
    while (out.size() >= 3) {
      const Point& a = out[out.size() - 3];
      const Point& b = out[out.size() - 2];
      const Point& c = out[out.size() - 1];
      const double area = std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
      if (area > 1e-9 * (c - a).norm()) break;
      out.erase(out.end() - 2);
    }
  }
  return out;
}

struct SampledGraph {
  std::vector<Point> nodes;
  std::vector<std::vector<double>> w;  // inf if not visible
};

SampledGraph sampled_graph(const Point& s, const Point& t, const Terrain& terrain) {
  SampledGraph g;
  for (int id = 0; id < terrain.polygon_count(); ++id)
    for (const auto& v : terrain.polygon(id).vertices()) g.nodes.push_back(v);
  g.nodes.push_back(s);
  g.nodes.push_back(t);
  const std::size_t n = g.nodes.size();
  g.w.assign(n, std::vector<double>(n, 1e300));
  for (std::size_t i = 0; i < n; ++i) {
    g.w[i][i] = 0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (segment_inside(g.nodes[i], g.nodes[j], terrain, 600)) {
        g.w[i][j] = g.w[j][i] = (g.nodes[i] - g.nodes[j]).norm();
      }
    }
  }
  return g;
}

}  // namespace

bool inside_closed(const Point& p, const Terrain& t, double band) {
  for (int id = 0; id < t.polygon_count(); ++id)
    if (boundary_dist(p, t.polygon(id)) <= band) return true;
  if (winding(p, t.outer()) == 0) return false;
  for (int id = 1; id < t.polygon_count(); ++id)
    if (winding(p, t.polygon(id)) != 0) return false;
  return true;
}

bool segment_inside(const Point& a, const Point& b, const Terrain& t, int samples) {
  for (int i = 0; i <= samples; ++i) {
    const double f = static_cast<double>(i) / samples;
    if (!inside_closed(a + f * (b - a), t)) return false;
  }
  return true;
}

double geodesic_distance(const Point& s, const Point& t, const Terrain& terrain) {
  SampledGraph g = sampled_graph(s, t, terrain);
  const std::size_t n = g.nodes.size();
  auto d = g.w;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d[n - 2][n - 1];
}

std::vector<std::vector<Point>> all_shortest_paths(const Point& s, const Point& t, const Terrain& terrain,
                                                   double rel_tol) {
  SampledGraph g = sampled_graph(s, t, terrain);
  const std::size_t n = g.nodes.size();
  auto d = g.w;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  const std::size_t src = n - 2, dst = n - 1;
  const double best = d[src][dst];
  const double tol = rel_tol * best + 1e-12;
  std::vector<std::vector<Point>> out;
  std::vector<std::size_t> stack{src};
  std::vector<bool> used(n, false);
  used[src] = true;
  auto dfs = [&](auto&& self, std::size_t u, double len) -> void {
    if (u == dst) {
      std::vector<Point> pts;
      for (auto k : stack) pts.push_back(g.nodes[k]);
      pts = simplify(pts);
      for (const auto& q : out) {
        if (q.size() == pts.size() &&
            std::equal(q.begin(), q.end(), pts.begin(), [](const Point& a, const Point& b) { return (a - b).norm() < 1e-9; }))
          return;
      }
      out.push_back(pts);
      return;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v] || g.w[u][v] >= 1e299) continue;
      if (len + g.w[u][v] + d[v][dst] > best + tol) continue;
      used[v] = true;
      stack.push_back(v);
      self(self, v, len + g.w[u][v]);
      stack.pop_back();
      used[v] = false;
    }
  };
  dfs(dfs, src, 0.0);
  return out;
}

double clockwise_angle(const Point& base, const Point& v) {
  const double a = std::atan2(base.y(), base.x()) - std::atan2(v.y(), v.x());
  double r = std::fmod(a + 4 * std::numbers::pi, 2 * std::numbers::pi);
  return r;
}

namespace {
double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson_rec(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, 40);
}

NearestSamples nearest_boundary_samples(const Point& p, const rdv::Polygon& poly, double h, double slack) {
  std::vector<Point> samples;
  const auto& v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    const int k = std::max(1, static_cast<int>(std::ceil((b - a).norm() / h)));
    for (int j = 0; j < k; ++j) samples.push_back(a + (static_cast<double>(j) / k) * (b - a));
  }
  NearestSamples out{1e300, {}};
  for (const auto& q : samples) out.distance = std::min(out.distance, (q - p).norm());
  for (const auto& q : samples)
    if ((q - p).norm() <= out.distance + slack) out.near.push_back(q);
  return out;
}

rdv::RigidMotion random_motion(std::mt19937_64& rng, double max_shift) {
  rdv::RigidMotion m = rdv::RigidMotion::Identity();
  m.translate(Point((2 * unit(rng) - 1) * max_shift, (2 * unit(rng) - 1) * max_shift));
  m.rotate(Eigen::Rotation2Dd(2 * std::numbers::pi * unit(rng)));
  return m;
}

}  // namespace oracle
