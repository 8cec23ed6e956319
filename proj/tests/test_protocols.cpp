#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "rdv/medial.hpp"
#include "rdv/protocols.hpp"

using namespace rdv;

namespace {

Polygon rect(double x0, double y0, double x1, double y1) {
  return Polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

Terrain unit_square() { return Terrain::create(rect(0, 0, 1, 1)); }
Terrain centred_hole() { return Terrain::create(rect(0, 0, 10, 10), {rect(4, 4, 6, 6)}); }
Terrain tall_hole() { return Terrain::create(rect(0, 0, 10, 10), {rect(4, 2, 6, 8)}); }

bool near(const Point& a, const Point& b, double tol = 1e-9) { return (a - b).norm() <= tol; }

AgentConfig agent(Point start, int label = 1, double compass = 0) {
  AgentConfig a;
  a.start = start;
  a.label = label;
  a.compass = compass;
  return a;
}

void check_in_terrain(const Route& r, const Terrain& t) {
  for (std::size_t i = 0; i < r.segment_count(); ++i) {
    const Segment s = r.segment(i);
    CHECK(oracle::segment_inside(s.a, s.b, t, 200));
  }
}

}  // namespace

TEST_CASE("modified_label") {
  CHECK(modified_label(1) == "110");
  CHECK(modified_label(2) == "10100");
  CHECK(modified_label(5) == "1011000");
  CHECK(modified_label(1000).size() == 21);
}

TEST_CASE("compass frame") {
  CHECK(near(compass_north(0), {0, 1}));
  CHECK(near(compass_east(0), {1, 0}));
  CHECK(near(compass_north(std::numbers::pi / 2), {-1, 0}, 1e-12));
  CHECK(near(compass_east(std::numbers::pi / 2), {0, 1}, 1e-12));
}

TEST_CASE("rvcm") {
  const Terrain sq = unit_square();
  const Route r1 = build_rvcm(agent({0.2, 0.2}), {0.8, 0.8}, sq);
  const Route r2 = build_rvcm(agent({0.8, 0.8}), {0.2, 0.2}, sq);
  CHECK(r1.length() == doctest::Approx(0.6 * std::sqrt(2.0)));
  CHECK(near(r1.end(), {0.8, 0.8}));
  CHECK(r2.segment_count() == 0);

  // Same latitude: the easternmost is v.
  CHECK(build_rvcm(agent({0.8, 0.5}), {0.2, 0.5}, sq).segment_count() == 0);
  CHECK(near(build_rvcm(agent({0.2, 0.5}), {0.8, 0.5}, sq).end(), {0.8, 0.5}));

  // Rotated shared compass on the tall-hole instance.
  const double c = std::numbers::pi / 6;
  const Terrain t = tall_hole();
  const Route a = build_rvcm(agent({2, 5}, 1, c), {8, 5}, t);
  const Route b = build_rvcm(agent({8, 5}, 1, c), {2, 5}, t);
  // North is (-1/2, sqrt3/2): (2,5) is further north.
  CHECK(a.segment_count() == 0);
  CHECK(near(b.end(), {2, 5}));
  CHECK(b.length() == doctest::Approx(2 + 2 * std::sqrt(13.0)));
  CHECK(near(b.waypoints()[1], unique_path({8, 5}, {2, 5}, t).waypoints[1]));

  CHECK_THROWS_AS(build_rvcm(agent({0.5, 0.5}), {0.5, 0.5}, sq), Error);
}

TEST_CASE("rvm") {
  const Terrain sq = unit_square();
  const Route r1 = build_rvm(agent({0.1, 0.1}), {0.9, 0.1}, sq);
  const Route r2 = build_rvm(agent({0.9, 0.1}), {0.1, 0.1}, sq);
  CHECK(near(r1.end(), {0.5, 0.1}));
  CHECK(near(r2.end(), {0.5, 0.1}));
  CHECK(r1.length() + r2.length() == doctest::Approx(0.8));

  const Terrain l = Terrain::create(Polygon({{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}}));
  const Point s(3.5, 1), e(1, 3.5);
  const double d = oracle::geodesic_distance(s, e, l);
  const Route a = build_rvm(agent(s, 1, 0.3), e, l);
  const Route b = build_rvm(agent(e, 1, 2.1), s, l);
  CHECK(near(a.end(), b.end(), 1e-9));
  CHECK(a.length() + b.length() == doctest::Approx(d).epsilon(1e-12));
  check_in_terrain(a, l);

  CHECK_THROWS_AS(build_rvm(agent({1, 1}), {9, 9}, centred_hole()), Error);
}

TEST_CASE("ring embedding") {
  const Terrain t = tall_hole();
  const RingEmbedding r = build_ring({2, 5}, {8, 5}, t);
  CHECK(near(r.a, {5, 2}));
  CHECK(near(r.b, {5, 8}));
  const double D = 2 + 2 * std::sqrt(13.0);
  CHECK(r.length() == doctest::Approx(2 * D));
  const RingEmbedding s = build_ring({8, 5}, {2, 5}, t);
  CHECK(near(s.a, r.b));
  CHECK(near(s.b, r.a));
  // Agent 2's forward tour is the same oriented cycle started at w.
  const Polyline f1 = r.tour(true), f2 = s.tour(true);
  CHECK(polyline_length(f1) == doctest::Approx(polyline_length(f2)));
  for (std::size_t i = 0; i < s.arcs.size(); ++i) {
    const auto& x = s.arcs[i];
    const auto& y = r.arcs[(i + 2) % 4];
    REQUIRE(x.size() == y.size());
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(near(x[k], y[k]));
  }

  const RingEmbedding deg = build_ring({0.1, 0.1}, {0.9, 0.5}, unit_square());
  CHECK(near(deg.a, deg.b));
}

TEST_CASE("rvmo route lengths") {
  const Terrain t = tall_hole();
  const double D = 2 + 2 * std::sqrt(13.0);
  const Route r1 = build_rvmo(agent({2, 5}, 1), {8, 5}, t, 2);
  const Route r2 = build_rvmo(agent({8, 5}, 2), {2, 5}, t, 1);
  CHECK(r1.length() == doctest::Approx(6 * 2 * D));
  CHECK(r2.length() == doctest::Approx(10 * 2 * D));
  CHECK(near(r1.end(), {2, 5}));
  CHECK_THROWS_AS(build_rvmo(agent({2, 5}, 3), {8, 5}, t, 3), Error);
}

TEST_CASE("ray progress walkthrough") {
  const Terrain t = centred_hole();
  const ProgressResult p = ray_progress_phase({5, 1}, {0, 1}, t);
  CHECK(p.done);
  CHECK(near(p.final_point, {5, 10}));
  CHECK(polyline_length(p.path) == doctest::Approx(3 + 8 + 4 + 4 + 40 + 0));
  CHECK(near(p.path[1], {5, 4}));

  const ProgressResult q = ray_progress_phase({0.3, 0.4}, {0, 1}, unit_square());
  CHECK(q.done);
  CHECK(polyline_length(q.path) == doctest::Approx(0.6 + 4));

  // Grazing an obstacle corner does not count as a hit.
  const Terrain g = Terrain::create(rect(0, 0, 10, 10), {rect(4, 6, 6, 8)});
  const ProgressResult e = ray_progress_phase({2, 2}, Vec2(1, 1).normalized(), g);
  CHECK(near(e.path[1], {10, 10}, 1e-8));
}

TEST_CASE("segment progress") {
  const Terrain t = centred_hole();
  const ProgressResult clear = segment_progress_phase({1, 1}, {3, 8}, t);
  CHECK(clear.done);
  CHECK(clear.path.size() == 2);

  const ProgressResult blocked = segment_progress_phase({5, 1}, {5, 5}, t);
  CHECK_FALSE(blocked.done);
  CHECK(blocked.last_polygon == 1);
  CHECK(near(blocked.final_point, {5, 4}));
  CHECK(polyline_length(blocked.path) == doctest::Approx(3 + 8));

  const ProgressResult through = segment_progress_phase({5, 1}, {5, 9}, t);
  CHECK(through.done);
  CHECK(near(through.final_point, {5, 9}));
  CHECK(polyline_length(through.path) == doctest::Approx(3 + 8 + 4 + 3));
}

TEST_CASE("rvc") {
  const Terrain t = centred_hole();
  const Route r = build_rvc(agent({5, 1}), t);
  CHECK(near(r.end(), {10, 10}));
  CHECK(r.length() <= 4 * t.perimeter());
  check_in_terrain(r, t);

  const Terrain sq = unit_square();
  CHECK(near(build_rvc(agent({0.3, 0.2}), sq).end(), {1, 1}));
  CHECK(near(build_rvc(agent({0.7, 0.9}), sq).end(), {1, 1}));

  // Both compasses rotated 90 degrees: North is world -x, East is world +y.
  const double c = std::numbers::pi / 2;
  const Route a = build_rvc(agent({2, 2}, 1, c), t);
  const Route b = build_rvc(agent({8, 3}, 2, c), t);
  CHECK(near(a.end(), {0, 10}));
  CHECK(near(b.end(), {0, 10}));
}

TEST_CASE("rv") {
  const Terrain sq = Terrain::create(rect(-1, -1, 1, 1));
  CHECK(near(build_rv(agent({0.3, 0.2}, 1, 0.4), sq).end(), {0, 0}));
  CHECK(near(build_rv(agent({-0.5, 0.7}, 1, 2.0), sq).end(), {0, 0}));

  const Terrain r = Terrain::create(rect(0, 0, 4, 2));
  const Route a = build_rv(agent({0.5, 0.5}, 1, 0.1), r);
  CHECK(near(a.end(), {2, 1}));
  CHECK(a.length() <= 3 * r.perimeter());

  std::mt19937_64 rng(4);
  const RigidMotion m = oracle::random_motion(rng);
  const Terrain rr = r.transformed(m);
  const Route b = build_rv(agent(m * Point(3.5, 0.3), 1, 1.3), rr);
  const Route c = build_rv(agent(m * Point(1, 1.5), 2, -2.2), rr);
  CHECK(near(b.end(), m * Point(2, 1), 1e-6));
  CHECK(near(c.end(), m * Point(2, 1), 1e-6));
  CHECK_THROWS_AS(build_rv(agent({1, 1}), centred_hole()), Error);
}

TEST_CASE("rvo") {
  const Terrain t = centred_hole();
  const Route r1 = build_rvo(agent({5, 1}, 1), t, 2);
  const Route r2 = build_rvo(agent({1, 8}, 2, 1.0), t, 1);
  const double x = 8;
  for (const auto& [r, bits] : {std::pair{&r1, 3}, std::pair{&r2, 5}}) {
    double p3 = 0, p12 = 0;
    for (const auto& ph : r->phases()) (ph.name == "phase3" ? p3 : p12) += ph.length;
    CHECK(p3 <= x + 2 * x * bits + 1e-9);
    CHECK(p3 >= 2 * x * bits - 1e-9);
    CHECK(p12 <= 6 * t.perimeter());
    CHECK(classify_point(r->end(), t).polygon == 1);
    check_in_terrain(*r, t);
  }

  // Obstacle away from the medial point: both stop there.
  const Terrain off = Terrain::create(rect(0, 0, 10, 10), {rect(1, 1, 2, 3)});
  const Route a = build_rvo(agent({8, 2}, 1), off, 2);
  const Route b = build_rvo(agent({3, 8}, 2, 2.5), off, 1);
  CHECK(near(a.end(), {5, 5}));
  CHECK(near(b.end(), {5, 5}));
  CHECK_THROWS_AS(build_rvo(agent({8, 2}, 4), off, 4), Error);
}

TEST_CASE("build_routes enforces preconditions") {
  const Terrain t = centred_hole();
  try {
    build_routes(Algorithm::Rvm, agent({1, 1}), agent({9, 9}), t);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolation);
    CHECK(std::string(e.what()).find("HasObstacles") != std::string::npos);
  }
  CHECK_THROWS_AS(build_routes(Algorithm::Rvc, agent({1, 1}, 1, 0), agent({9, 9}, 2, 1), t), Error);
  CHECK_THROWS_AS(build_routes(Algorithm::Rvo, agent({1, 1}, 2), agent({9, 9}, 2), t), Error);
  CHECK(parse_algorithm("rvmo") == Algorithm::Rvmo);
  CHECK_THROWS_AS(parse_algorithm("foo"), Error);
}
