#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "rdv/geometry.hpp"
#include "rdv/terrain_io.hpp"

using namespace rdv;

namespace {

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Terrain unit_square() { return Terrain::create(rect(0, 0, 1, 1)); }
Terrain square_with_hole() { return Terrain::create(rect(0, 0, 10, 10), {rect(4, 4, 6, 6)}); }

bool near(const Point& a, const Point& b, double tol = 1e-9) { return (a - b).norm() <= tol; }

}  // namespace

TEST_CASE("classify_point") {
  const Terrain sq = unit_square();
  CHECK(classify_point({0.5, 0.5}, sq).kind == Locus::Kind::Interior);
  const Locus b = classify_point({0, 0.5}, sq);
  CHECK(b.kind == Locus::Kind::Boundary);
  CHECK(b.polygon == kOuter);
  CHECK(near(sq.outer().edge(b.edge).at(0.5), Point(0, 0.5)));
  CHECK(classify_point({5, 5}, square_with_hole()).kind == Locus::Kind::Outside);
  CHECK(classify_point({2, 0.5}, sq).kind == Locus::Kind::Outside);
  CHECK(classify_point({0.5, 1 + 5e-10}, sq).kind == Locus::Kind::Boundary);
}

TEST_CASE("first_hit") {
  const Terrain sq = unit_square();
  auto h = first_hit({0.5, 0.5}, {0, 1}, sq);
  REQUIRE(h);
  CHECK(near(h->point, {0.5, 1}));
  CHECK(h->polygon == kOuter);

  h = first_hit({5, 1}, {0, 1}, square_with_hole());
  REQUIRE(h);
  CHECK(near(h->point, {5, 4}));
  CHECK(h->polygon == 1);

  h = first_hit({1, 1}, Vec2(1, 1).normalized(), Terrain::create(rect(0, 0, 10, 10)));
  REQUIRE(h);
  CHECK(near(h->point, {10, 10}, 1e-8));

  // Immediate exit from the outer boundary.
  CHECK_FALSE(first_hit({0, 0.5}, {-1, 0}, sq));
  // Grazing an obstacle corner is not a hit.
  h = first_hit({2, 2}, Vec2(1, 1).normalized(), Terrain::create(rect(0, 0, 10, 10), {rect(4, 6, 6, 8)}));
  REQUIRE(h);
  CHECK(near(h->point, {10, 10}, 1e-8));
  // Running along an edge is degenerate.
  CHECK_THROWS_AS(first_hit({0, 0.5}, {0, 1}, sq), Error);
}

TEST_CASE("first_hit distances grow when re-entering past an obstacle") {
  const Terrain t = Terrain::create(rect(0, 0, 20, 10), {rect(4, 4, 6, 6), rect(10, 3, 12, 7)});
  const Point p(1, 5);
  const Vec2 d(1, 0);
  auto h1 = first_hit(p, d, t);
  REQUIRE(h1);
  CHECK(h1->distance == doctest::Approx(3));
  const auto crossings = boundary_crossings(p, d, t.polygon(h1->polygon));
  const Point resume = p + (crossings.back() + 1e-6) * d;
  auto h2 = first_hit(resume, d, t);
  REQUIRE(h2);
  CHECK((h2->point - p).norm() > h1->distance);
  CHECK(h2->point.x() == doctest::Approx(10));
}

TEST_CASE("every interior ray hits the boundary") {
  std::mt19937_64 rng(7);
  const Terrain t = Terrain::create(rect(0, 0, 10, 10), {rect(4, 4, 6, 6), rect(1, 7, 3, 9)});
  for (int i = 0; i < 300; ++i) {
    const Point p(10 * oracle::unit(rng), 10 * oracle::unit(rng));
    if (classify_point(p, t).kind != Locus::Kind::Interior) continue;
    const double a = 2 * std::numbers::pi * oracle::unit(rng);
    const auto h = first_hit(p, {std::cos(a), std::sin(a)}, t);
    REQUIRE(h);
    CHECK(classify_point(h->point, t).kind == Locus::Kind::Boundary);
    CHECK(oracle::segment_inside(p, h->point, t, 400));
  }
}

TEST_CASE("boundary_tour") {
  const Terrain sq = unit_square();
  const Polyline ccw = boundary_tour({0, 0.5}, sq.outer(), Orientation::CounterClockwise);
  CHECK(polyline_length(ccw) == doctest::Approx(4).epsilon(1e-9));
  REQUIRE(ccw.size() == 6);
  CHECK(near(ccw.front(), {0, 0.5}));
  CHECK(near(ccw[1], {0, 0}));
  CHECK(near(ccw[2], {1, 0}));
  CHECK(near(ccw.back(), {0, 0.5}));

  const Polyline cw = boundary_tour({0, 0.5}, sq.outer(), Orientation::Clockwise);
  CHECK(near(cw[1], {0, 1}));

  const Terrain h = square_with_hole();
  const Polyline ob = boundary_tour({5, 4}, h.polygon(1), Orientation::Clockwise);
  CHECK(polyline_length(ob) == doctest::Approx(8));
  CHECK(near(ob[1], {4, 4}));

  const double s3 = std::sqrt(3.0);
  const Polygon tri({{0, 0}, {2, 0}, {1, s3}});
  CHECK(polyline_length(boundary_tour({1, 0}, tri, Orientation::Clockwise)) == doctest::Approx(6));
  CHECK(polyline_length(boundary_tour({2, 0}, tri, Orientation::CounterClockwise)) == doctest::Approx(6));

  CHECK_THROWS_AS(boundary_tour({0.5, 0.5}, sq.outer(), Orientation::Clockwise), Error);
}

TEST_CASE("boundary_walk_to") {
  const Terrain sq = unit_square();
  const Polyline a = boundary_walk_to({0, 0}, {1, 1}, sq.outer(), Orientation::CounterClockwise);
  REQUIRE(a.size() == 3);
  CHECK(near(a[1], {1, 0}));
  CHECK(polyline_length(a) == doctest::Approx(2));
  const Polyline b = boundary_walk_to({0, 0}, {1, 1}, sq.outer(), Orientation::Clockwise);
  CHECK(near(b[1], {0, 1}));
  CHECK(polyline_length(b) == doctest::Approx(2));

  const Terrain big = Terrain::create(rect(0, 0, 10, 10));
  CHECK(polyline_length(boundary_walk_to({0, 0}, {10, 0}, big.outer(), Orientation::CounterClockwise)) ==
        doctest::Approx(10));
  CHECK(polyline_length(boundary_walk_to({0, 0}, {10, 0}, big.outer(), Orientation::Clockwise)) ==
        doctest::Approx(30));
  CHECK_THROWS_AS(boundary_walk_to({0, 0}, {5, 5}, big.outer(), Orientation::Clockwise), Error);
}

TEST_CASE("perimeter_stats") {
  auto s = perimeter_stats(unit_square());
  CHECK(s.P == doctest::Approx(4));
  CHECK(s.x == 0);
  s = perimeter_stats(square_with_hole());
  CHECK(s.P == doctest::Approx(48));
  CHECK(s.x == doctest::Approx(8));
}

TEST_CASE("ingestion normalizes and validates") {
  // Clockwise outer, counterclockwise obstacle, a collinear vertex.
  const Terrain t = Terrain::create(Polygon({{0, 0}, {0, 10}, {10, 10}, {10, 5}, {10, 0}}),
                                    {Polygon({{4, 4}, {6, 4}, {6, 6}, {4, 6}})});
  CHECK(t.outer().orientation() == Orientation::CounterClockwise);
  CHECK(t.outer().size() == 4);
  CHECK(t.polygon(1).orientation() == Orientation::Clockwise);

  CHECK_THROWS_AS(Terrain::create(Polygon({{0, 0}, {1, 0}})), Error);
  CHECK_THROWS_AS(Terrain::create(Polygon({{0, 0}, {2, 2}, {2, 0}, {0, 2}})), Error);  // bow tie
  CHECK_THROWS_AS(Terrain::create(rect(0, 0, 10, 10), {rect(8, 8, 12, 12)}), Error);
  CHECK_THROWS_AS(Terrain::create(rect(0, 0, 10, 10), {rect(2, 2, 4, 4), rect(4 + 1e-9, 2, 6, 4)}), Error);
  CHECK_THROWS_AS(Terrain::create(rect(0, 0, 10, 10), {rect(0, 2, 4, 4)}), Error);
  CHECK_THROWS_AS(Terrain::create(rect(0, 0, 2e6, 10)), Error);
  try {
    Terrain::create(Polygon({{0, 0}, {2, 2}, {2, 0}, {0, 2}}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidTerrain);
  }
}

TEST_CASE("json round trip") {
  const Terrain t = square_with_hole();
  const Terrain u = terrain_from_json(terrain_to_json(t));
  CHECK(u.perimeter() == doctest::Approx(t.perimeter()));
  CHECK(terrain_hash(u) == terrain_hash(t));
  CHECK_THROWS_AS(terrain_from_json(Json::parse(R"({"outer": 3})")), Error);
  CHECK(round12(1.0 / 3.0) == 0.333333333333);
}

TEST_CASE("classify_point is invariant under rigid motions") {
  std::mt19937_64 rng(11);
  const Terrain t = Terrain::create(rect(0, 0, 10, 10), {rect(4, 4, 6, 6)});
  for (int trial = 0; trial < 20; ++trial) {
    const RigidMotion m = oracle::random_motion(rng);
    const Terrain u = t.transformed(m);
    for (int i = 0; i < 50; ++i) {
      const Point p(12 * oracle::unit(rng) - 1, 12 * oracle::unit(rng) - 1);
      const auto k = classify_point(p, t).kind;
      if (k != Locus::Kind::Boundary && distance_to_boundary(p, t.outer()) < 1e-6) continue;
      CHECK(classify_point(m * p, u).kind == k);
    }
    // Vertices stay boundary points.
    CHECK(classify_point(m * Point(4, 4), u).kind == Locus::Kind::Boundary);
  }
}

TEST_CASE("split_polyline") {
  const Polyline l{{0, 0}, {2, 0}, {2, 2}};
  const auto [a, b] = split_polyline(l, 3);
  CHECK(polyline_length(a) == doctest::Approx(3));
  CHECK(polyline_length(b) == doctest::Approx(1));
  CHECK(near(a.back(), {2, 1}));
  CHECK(near(b.front(), {2, 1}));
}
