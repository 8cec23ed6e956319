#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "rdv/visibility.hpp"

using namespace rdv;

namespace {

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Terrain tall_hole() { return Terrain::create(rect(0, 0, 10, 10), {rect(4, 2, 6, 8)}); }

bool same_path(const std::vector<Point>& a, const std::vector<Point>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((a[i] - b[i]).norm() > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("oracle freezes the tall-hole instance") {
  const Terrain t = tall_hole();
  const double d = oracle::geodesic_distance({2, 5}, {8, 5}, t);
  CHECK(d == doctest::Approx(2 + 2 * std::sqrt(13.0)).epsilon(1e-12));
  CHECK(oracle::all_shortest_paths({2, 5}, {8, 5}, t).size() == 2);
}

TEST_CASE("shortest_path") {
  const Terrain sq = Terrain::create(rect(0, 0, 1, 1));
  const GeodesicPath p = shortest_path({0.1, 0.1}, {0.9, 0.1}, sq);
  CHECK(p.waypoints.size() == 2);
  CHECK(p.length == doctest::Approx(0.8));

  const GeodesicPath q = shortest_path({2, 5}, {8, 5}, tall_hole());
  CHECK(q.length == doctest::Approx(oracle::geodesic_distance({2, 5}, {8, 5}, tall_hole())).epsilon(1e-12));
  CHECK(q.waypoints.size() == 4);
}

TEST_CASE("shortest_path matches Floyd-Warshall on random terrains") {
  std::mt19937_64 rng(3);
  const Terrain t = Terrain::create(Polygon({{0, 0}, {12, 0}, {12, 5}, {7, 6}, {12, 7}, {12, 12}, {0, 12}}),
                                    {rect(2, 2, 4, 6), Polygon({{5, 8}, {8, 9}, {6, 10.5}})});
  for (int i = 0; i < 40; ++i) {
    const Point s(12 * oracle::unit(rng), 12 * oracle::unit(rng));
    const Point e(12 * oracle::unit(rng), 12 * oracle::unit(rng));
    if (classify_point(s, t).kind != Locus::Kind::Interior || classify_point(e, t).kind != Locus::Kind::Interior)
      continue;
    const double want = oracle::geodesic_distance(s, e, t);
    CHECK(shortest_path(s, e, t).length == doctest::Approx(want).epsilon(1e-9));
    CHECK(shortest_path(e, s, t).length == doctest::Approx(want).epsilon(1e-9));
    const Point m(12 * oracle::unit(rng), 12 * oracle::unit(rng));
    if (classify_point(m, t).kind == Locus::Kind::Interior)
      CHECK(want <= shortest_path(s, m, t).length + shortest_path(m, e, t).length + 1e-9);
  }
}

TEST_CASE("enumerate_shortest_paths") {
  const Terrain sq = Terrain::create(rect(0, 0, 1, 1));
  CHECK(enumerate_shortest_paths(shortest_path_dag({0.1, 0.2}, {0.8, 0.9}, sq)).size() == 1);

  const auto two = enumerate_shortest_paths(shortest_path_dag({2, 5}, {8, 5}, tall_hole()));
  CHECK(two.size() == 2);
  const auto want = oracle::all_shortest_paths({2, 5}, {8, 5}, tall_hole());
  for (const auto& p : two) {
    bool found = false;
    for (const auto& w : want) found = found || same_path(p.waypoints, w, 1e-9);
    CHECK(found);
  }

  const Terrain centred = Terrain::create(rect(0, 0, 10, 10), {rect(4, 4, 6, 6)});
  const auto diag = enumerate_shortest_paths(shortest_path_dag({1, 1}, {9, 9}, centred));
  CHECK(diag.size() == 2);
  CHECK(oracle::all_shortest_paths({1, 1}, {9, 9}, centred).size() == 2);
}

TEST_CASE("empty polygons have exactly one shortest path") {
  std::mt19937_64 rng(5);
  // Star-shaped and convex polygons.
  std::vector<Polygon> polys;
  std::vector<Point> star, conv;
  for (int i = 0; i < 10; ++i) {
    const double a = 2 * std::numbers::pi * i / 10;
    const double r = (i % 2 == 0) ? 5 : 2;
    star.emplace_back(r * std::cos(a), r * std::sin(a));
    conv.emplace_back(5 * std::cos(a + 0.1), 3 * std::sin(a + 0.1));
  }
  polys.emplace_back(star);
  polys.emplace_back(conv);
  for (const auto& poly : polys) {
    const Terrain t = Terrain::create(poly);
    int tested = 0;
    while (tested < 15) {
      const Point s(10 * oracle::unit(rng) - 5, 10 * oracle::unit(rng) - 5);
      const Point e(10 * oracle::unit(rng) - 5, 10 * oracle::unit(rng) - 5);
      if (classify_point(s, t).kind != Locus::Kind::Interior || classify_point(e, t).kind != Locus::Kind::Interior)
        continue;
      ++tested;
      CHECK(enumerate_shortest_paths(shortest_path_dag(s, e, t)).size() == 1);
      const GeodesicPath u = unique_path(s, e, t);
      CHECK(same_path(u.waypoints, shortest_path(s, e, t).waypoints, 1e-12));
    }
  }
}

TEST_CASE("clockwise_first") {
  const Vec2 up(0, 1), down(0, -1);
  const Vec2 c1[] = {up, down};
  CHECK(clockwise_first({1, 0}, c1) == 1);
  const Vec2 c2[] = {Vec2(1, 0)};
  CHECK(clockwise_first({1, 0}, c2) == 0);
  const Vec2 c3[] = {Vec2(-2, 3).normalized(), Vec2(-2, -3).normalized()};
  CHECK(clockwise_first({-1, 0}, c3) == 0);
  CHECK(oracle::clockwise_angle({-1, 0}, c3[0]) < oracle::clockwise_angle({-1, 0}, c3[1]));
  const Vec2 c4[] = {up, Vec2(std::sin(1e-12), std::cos(1e-12))};
  CHECK_THROWS_AS(clockwise_first({1, 0}, c4), Error);
}

TEST_CASE("clockwise_angle agrees with the polar-angle oracle") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 500; ++i) {
    const double a = 2 * std::numbers::pi * oracle::unit(rng);
    const double b = 2 * std::numbers::pi * oracle::unit(rng);
    const Vec2 u(std::cos(a), std::sin(a)), v(std::cos(b), std::sin(b));
    const double want = oracle::clockwise_angle(u, v);
    if (want < 1e-6 || want > 2 * std::numbers::pi - 1e-6) continue;
    CHECK(clockwise_angle(u, v) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("unique_path picks the clockwise-first route") {
  const Terrain t = tall_hole();
  const GeodesicPath vw = unique_path({2, 5}, {8, 5}, t);
  CHECK(same_path(vw.waypoints, {{2, 5}, {4, 2}, {6, 2}, {8, 5}}, 1e-12));
  const GeodesicPath wv = unique_path({8, 5}, {2, 5}, t);
  CHECK(same_path(wv.waypoints, {{8, 5}, {6, 8}, {4, 8}, {2, 5}}, 1e-12));
  CHECK(vw.length == doctest::Approx(2 + 2 * std::sqrt(13.0)).epsilon(1e-12));
}

TEST_CASE("unique_path is frame independent") {
  std::mt19937_64 rng(21);
  const std::vector<Terrain> terrains = {
      tall_hole(), Terrain::create(rect(0, 0, 10, 10), {rect(4, 4, 6, 6)}),
      Terrain::create(rect(0, 0, 12, 8), {rect(2, 2, 4, 6), rect(7, 1, 9, 3), rect(7, 5, 9, 7)})};
  const std::vector<std::pair<Point, Point>> queries = {{{2, 5}, {8, 5}}, {{1, 1}, {9, 9}}, {{1, 4}, {11, 4}}};
  for (std::size_t k = 0; k < terrains.size(); ++k) {
    const auto [v, w] = queries[k];
    const GeodesicPath base = unique_path(v, w, terrains[k]);
    CHECK(base.length == doctest::Approx(shortest_path(v, w, terrains[k]).length).epsilon(1e-9));
    for (int trial = 0; trial < 10; ++trial) {
      const RigidMotion m = oracle::random_motion(rng);
      const GeodesicPath moved = unique_path(m * v, m * w, terrains[k].transformed(m));
      REQUIRE(moved.waypoints.size() == base.waypoints.size());
      for (std::size_t i = 0; i < base.waypoints.size(); ++i)
        CHECK((moved.waypoints[i] - m * base.waypoints[i]).norm() <= 1e-6);
    }
  }
}
