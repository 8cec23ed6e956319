#include "rdv/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rdv/error.hpp"
#include "rdv/medial.hpp"
#include "rdv/visibility.hpp"

namespace rdv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxRejections = 10000;
// Margin kept between generated polygons, well above the validator's
// minimum so that downstream ray casts stay far from grazing.
constexpr double kGeneratorClearance = 1.0;

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Polygon regular_polygon(int n, double circumradius, double phase, const Point& centre = Point::Zero()) {
  std::vector<Point> v;
  for (int i = 0; i < n; ++i) {
    const double a = phase + 2 * kPi * i / n;
    v.push_back(centre + circumradius * Vec2(std::cos(a), std::sin(a)));
  }
  return Polygon(std::move(v));
}

void check_expected_D(const Scenario& s, const char* who) {
  const double d = shortest_path(s.agent1.start, s.agent2.start, s.terrain).length;
  if (std::abs(d - *s.expected_D) > 1e-6) {
    std::ostringstream o;
    o.precision(12);
    o << who << ": geodesic distance " << d << " differs from " << *s.expected_D;
    throw Error(ErrorCode::NumericFailure, o.str());
  }
}

double segment_distance(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0;
  return std::min({distance_to_segment(a, c, d), distance_to_segment(b, c, d), distance_to_segment(c, a, b),
                   distance_to_segment(d, a, b)});
}

double boundary_distance(const Polygon& p, const Polygon& q) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j)
      best = std::min(best, segment_distance(p.vertex(i), p.vertex(i + 1), q.vertex(j), q.vertex(j + 1)));
  return best;
}

// Star-shaped polygon around centre with radii in [r_lo, r_hi].
Polygon random_star(std::mt19937_64& rng, int n, const Point& centre, double r_lo, double r_hi) {
  std::vector<Point> v;
  const double phase = 2 * kPi * unit(rng);
  for (int i = 0; i < n; ++i) {
    // Angular gaps stay below pi so the polygon contains its centre.
    const double a = phase + 2 * kPi * (i + 0.4 * unit(rng)) / n;
    const double r = r_lo + (r_hi - r_lo) * unit(rng);
    v.push_back(centre + r * Vec2(std::cos(a), std::sin(a)));
  }
  return Polygon(std::move(v));
}

}  // namespace

Scenario hexagon_terrain(double y, int rotation_index) {
  if (!(y > 0) || !std::isfinite(y)) throw Error(ErrorCode::PreconditionViolation, "hexagon side must be positive");
  if (rotation_index < 0 || rotation_index > 5)
    throw Error(ErrorCode::PreconditionViolation, "hexagon rotation index must be in 0..5");
  const double rot = rotation_index * kPi / 3;
  // A regular hexagon's side equals its circumradius.
  const Polygon outer = regular_polygon(6, y + 2, rot);
  const Polygon hole = regular_polygon(6, y, rot);
  Scenario s{Terrain::create(outer, {hole}), {}, {}, Algorithm::Rvo, 3 * y, Json::object()};
  // Slice j is the wedge of the corridor over obstacle side j.
  auto side_mid = [&](int j) { return Point(0.5 * (hole.vertex(j) + hole.vertex(j + 1))); };
  s.agent1.start = side_mid(0);
  s.agent2.start = side_mid(3);
  s.agent1.label = 1;
  s.agent2.label = 2;
  s.agent1.compass = rot;
  s.agent2.compass = rot + kPi;
  s.metadata["generator"] = "hexagon";
  s.metadata["y"] = y;
  s.metadata["rotation_index"] = rotation_index;
  s.metadata["slices"] = Json::array({0, 3});
  check_expected_D(s, "hexagon_terrain");
  return s;
}

Scenario double_pie(double D, int k) {
  if (!(D > 0) || !std::isfinite(D)) throw Error(ErrorCode::PreconditionViolation, "double pie D must be positive");
  if (k < 4 || k % 2 != 0) throw Error(ErrorCode::PreconditionViolation, "double pie k must be even and >= 4");
  const double apothem = D / 8;
  const double length = 3 * D / 8;
  const double circum = apothem / std::cos(kPi / k);
  // Side 0 faces +x; vertex i sits between sides i-1 and i.
  std::vector<Point> gon;
  for (int i = 0; i < k; ++i) {
    const double a = -kPi / k + 2 * kPi * i / k;
    gon.push_back(circum * Vec2(std::cos(a), std::sin(a)));
  }
  auto normal = [&](int i) {
    const double a = 2 * kPi * i / k;
    return Vec2(std::cos(a), std::sin(a));
  };
  const Point other_centre(D, 0);
  auto mirror = [&](const Point& p) { return Point(other_centre - p); };

  // One rosette, CCW, from vertex 1 round to vertex 0, skipping rectangle 0.
  std::vector<Point> half;
  Json rects = Json::array();
  for (int i = 1; i < k; ++i) {
    const Point a = gon[i], b = gon[(i + 1) % k];
    half.push_back(a);
    half.push_back(a + length * normal(i));
    half.push_back(b + length * normal(i));
  }
  half.push_back(gon[0]);

  std::vector<Point> outer = half;
  for (const Point& p : half) outer.push_back(mirror(p));

  auto rect_json = [&](const Point& a, const Point& b, const Vec2& n, bool passing) {
    Json r;
    r["passing"] = passing;
    r["corners"] = Json::array({point_to_json(a), point_to_json(b), point_to_json(b + length * n),
                                point_to_json(a + length * n)});
    return r;
  };
  for (int copy = 0; copy < 2; ++copy)
    for (int i = 0; i < k; ++i) {
      Point a = gon[i], b = gon[(i + 1) % k];
      Vec2 n = normal(i);
      if (copy == 1) {
        a = mirror(a);
        b = mirror(b);
        n = -n;
      }
      rects.push_back(rect_json(a, b, n, i == 0));
    }

  Terrain terrain;
  try {
    terrain = Terrain::create(Polygon(outer));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidTerrain) throw;
    throw Error(ErrorCode::GeometryOverlap,
                "double pie rectangles collide for k=" + std::to_string(k) + " (" + e.what() + ")");
  }
  Scenario s{terrain, {}, {}, Algorithm::Rv, D, Json::object()};
  s.agent1.start = Point::Zero();
  s.agent2.start = other_centre;
  s.agent1.label = 1;
  s.agent2.label = 2;
  s.metadata["generator"] = "double_pie";
  s.metadata["D"] = D;
  s.metadata["k"] = k;
  s.metadata["passing_rectangles"] = 2;
  s.metadata["normal_rectangles"] = 2 * k - 2;
  s.metadata["rectangles"] = rects;
  check_expected_D(s, "double_pie");
  return s;
}

Scenario random_terrain(std::uint64_t seed, int outer_vertices, int n_obstacles, const RandomTerrainOptions& options) {
  if (outer_vertices < 3 || outer_vertices > 64)
    throw Error(ErrorCode::PreconditionViolation, "outer vertex count must be in 3..64");
  if (n_obstacles < 0 || n_obstacles > 8) throw Error(ErrorCode::PreconditionViolation, "obstacle count must be in 0..8");
  if (options.max_obstacle_vertices < 3 || options.max_obstacle_vertices > 16)
    throw Error(ErrorCode::PreconditionViolation, "obstacle vertex cap must be in 3..16");
  if (options.obstacle_at_medial_point && n_obstacles < 1)
    throw Error(ErrorCode::PreconditionViolation, "medial obstacle needs at least one obstacle");

  std::mt19937_64 rng(seed);
  int rejections = 0;
  auto reject = [&] {
    if (++rejections >= kMaxRejections)
      throw Error(ErrorCode::GenerationExhausted, "no valid terrain after " + std::to_string(kMaxRejections) +
                                                      " attempts (seed " + std::to_string(seed) + ")");
  };

  for (;;) {
    const Polygon outer = random_star(rng, outer_vertices, Point::Zero(), 40, 100);
    try {
      Terrain::create(outer);
    } catch (const Error&) {
      reject();
      continue;
    }
    std::vector<Polygon> obstacles;
    bool failed = false;
    if (options.obstacle_at_medial_point) {
      Point m;
      try {
        m = medial_point(outer).point;
      } catch (const Error&) {
        reject();
        continue;
      }
      const double room = distance_to_boundary(m, outer);
      const int n = 3 + static_cast<int>(unit(rng) * (options.max_obstacle_vertices - 2));
      const double r_hi = std::min(0.5 * room, 15.0);
      if (r_hi < 2) {
        reject();
        continue;
      }
      obstacles.push_back(random_star(rng, n, m, 0.5 * r_hi, r_hi));
    }
    while (static_cast<int>(obstacles.size()) < n_obstacles) {
      const int n = 3 + static_cast<int>(unit(rng) * (options.max_obstacle_vertices - 2));
      const Point c(-100 + 200 * unit(rng), -100 + 200 * unit(rng));
      const double r = 3 + 9 * unit(rng);
      const Polygon cand = random_star(rng, n, c, 0.5 * r, r);
      bool ok = point_in_polygon(c, outer) && boundary_distance(cand, outer) >= kGeneratorClearance;
      for (const Point& p : cand.vertices()) ok = ok && point_in_polygon(p, outer);
      for (const Polygon& o : obstacles) {
        if (!ok) break;
        ok = boundary_distance(cand, o) >= kGeneratorClearance && !point_in_polygon(o.vertex(0), cand) &&
             !point_in_polygon(cand.vertex(0), o);
      }
      if (ok) {
        obstacles.push_back(cand);
        continue;
      }
      reject();
      if (rejections % 200 == 199) {
        failed = true;  // start over with a fresh outer polygon
        break;
      }
    }
    if (failed) continue;
    if (options.obstacle_at_medial_point &&
        (boundary_distance(obstacles[0], outer) < kGeneratorClearance)) {
      reject();
      continue;
    }

    Terrain terrain;
    try {
      terrain = Terrain::create(outer, obstacles);
    } catch (const Error&) {
      reject();
      continue;
    }

    auto clear_of_boundaries = [&](const Point& p) {
      if (classify_point(p, terrain).kind != Locus::Kind::Interior) return false;
      for (int id = 0; id < terrain.polygon_count(); ++id)
        if (distance_to_boundary(p, terrain.polygon(id)) < kGeneratorClearance) return false;
      return true;
    };
    auto random_start = [&]() -> std::optional<Point> {
      for (int i = 0; i < 1000; ++i) {
        const Point p(-100 + 200 * unit(rng), -100 + 200 * unit(rng));
        if (clear_of_boundaries(p)) return p;
      }
      return std::nullopt;
    };
    const auto s1 = random_start();
    const auto s2 = random_start();
    if (!s1 || !s2 || (*s1 - *s2).norm() < kGeneratorClearance) {
      reject();
      continue;
    }

    Scenario s{terrain, {}, {}, n_obstacles > 0 ? Algorithm::Rvo : Algorithm::Rv, std::nullopt, Json::object()};
    s.agent1.start = *s1;
    s.agent2.start = *s2;
    s.agent1.compass = 2 * kPi * unit(rng);
    s.agent2.compass = 2 * kPi * unit(rng);
    s.agent1.label = 1 + static_cast<int>(unit(rng) * 32);
    do {
      s.agent2.label = 1 + static_cast<int>(unit(rng) * 32);
    } while (s.agent2.label == s.agent1.label);
    s.metadata["generator"] = "random";
    s.metadata["seed"] = seed;
    s.metadata["rejections"] = rejections;
    return s;
  }
}

Scenario square_with_center_obstacle() {
  const Polygon outer({{0, 0}, {10, 0}, {10, 10}, {0, 10}});
  const Polygon hole({{4, 4}, {6, 4}, {6, 6}, {4, 6}});
  Scenario s{Terrain::create(outer, {hole}), {}, {}, Algorithm::Rvo, std::nullopt, Json::object()};
  s.agent1.start = Point(1, 1);
  s.agent2.start = Point(8, 3);
  s.agent1.label = 1;
  s.agent2.label = 2;
  s.metadata["generator"] = "square_with_center_obstacle";
  return s;
}

Scenario scenario_from_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.empty()) throw Error(ErrorCode::ParseError, "empty generator spec");
  auto num = [&](std::size_t i) {
    try {
      std::size_t used = 0;
      const double v = std::stod(parts.at(i), &used);
      if (used != parts[i].size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad number in generator spec '" + spec + "'");
    }
  };
  const std::string& kind = parts[0];
  if (kind == "square_with_center_obstacle" && parts.size() == 1) return square_with_center_obstacle();
  if (kind == "hexagon" && (parts.size() == 2 || parts.size() == 3))
    return hexagon_terrain(num(1), parts.size() == 3 ? static_cast<int>(num(2)) : 0);
  if (kind == "double_pie" && (parts.size() == 2 || parts.size() == 3))
    return double_pie(num(1), parts.size() == 3 ? static_cast<int>(num(2)) : 8);
  if (kind == "random" && (parts.size() == 4 || parts.size() == 5)) {
    RandomTerrainOptions opt;
    if (parts.size() == 5) {
      if (parts[4] != "medial") throw Error(ErrorCode::ParseError, "unknown random option '" + parts[4] + "'");
      opt.obstacle_at_medial_point = true;
    }
    return random_terrain(static_cast<std::uint64_t>(num(1)), static_cast<int>(num(2)), static_cast<int>(num(3)), opt);
  }
  throw Error(ErrorCode::ParseError, "unknown generator spec '" + spec + "'");
}

Json agent_to_json(const AgentConfig& a) {
  Json j;
  j["start"] = point_to_json(a.start);
  j["label"] = a.label;
  j["compass"] = round12(a.compass);
  j["has_map"] = a.has_map;
  if (a.alpha != 0) j["alpha"] = round12(a.alpha);
  return j;
}

AgentConfig agent_from_json(const Json& j) {
  try {
    AgentConfig a;
    a.start = point_from_json(j.at("start"));
    a.label = j.value("label", 1);
    a.compass = j.value("compass", 0.0);
    a.has_map = j.value("has_map", true);
    a.alpha = j.value("alpha", 0.0);
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("agent: ") + e.what());
  }
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["terrain"] = terrain_to_json(s.terrain);
  j["agents"] = Json::array({agent_to_json(s.agent1), agent_to_json(s.agent2)});
  j["algorithm"] = to_string(s.algorithm);
  if (s.expected_D) j["expected_D"] = round12(*s.expected_D);
  if (!s.metadata.empty()) j["metadata"] = s.metadata;
  return j;
}

Scenario scenario_from_json(const Json& j) {
  try {
    Scenario s;
    s.terrain = terrain_from_json(j.at("terrain"));
    const Json& agents = j.at("agents");
    if (!agents.is_array() || agents.size() != 2) throw Error(ErrorCode::ParseError, "scenario needs two agents");
    s.agent1 = agent_from_json(agents[0]);
    s.agent2 = agent_from_json(agents[1]);
    s.algorithm = parse_algorithm(j.value("algorithm", std::string("rvo")));
    if (j.contains("expected_D") && !j["expected_D"].is_null()) s.expected_D = j["expected_D"].get<double>();
    if (j.contains("metadata")) s.metadata = j["metadata"];
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("scenario: ") + e.what());
  }
}

}  // namespace rdv
