#include "rdv/terrain_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rdv {

Json point_to_json(const Point& p) { return Json::array({p.x(), p.y()}); }

Point point_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorCode::ParseError, "point must be [x, y], got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>()};
}

namespace {

Polygon polygon_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, what + " must be a list of points");
  std::vector<Point> pts;
  for (const auto& p : j) pts.push_back(point_from_json(p));
  return Polygon(std::move(pts));
}

Json polygon_to_json(const Polygon& p) {
  Json arr = Json::array();
  for (const auto& v : p.vertices()) arr.push_back(point_to_json(v));
  return arr;
}

}  // namespace

Terrain terrain_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("outer"))
    throw Error(ErrorCode::ParseError, "terrain must be an object with an \"outer\" polygon");
  Polygon outer = polygon_from_json(j.at("outer"), "outer");
  std::vector<Polygon> obstacles;
  if (j.contains("obstacles")) {
    const Json& obs = j.at("obstacles");
    if (!obs.is_array()) throw Error(ErrorCode::ParseError, "\"obstacles\" must be a list");
    for (std::size_t i = 0; i < obs.size(); ++i)
      obstacles.push_back(polygon_from_json(obs[i], "obstacle " + std::to_string(i + 1)));
  }
  return Terrain::create(std::move(outer), std::move(obstacles));
}

Json terrain_to_json(const Terrain& t) {
  Json j;
  j["outer"] = polygon_to_json(t.outer());
  Json obs = Json::array();
  for (const auto& o : t.obstacles()) obs.push_back(polygon_to_json(o));
  j["obstacles"] = obs;
  return j;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

Terrain load_terrain(const std::string& path) {
  const Json j = load_json(path);
  // Scenario files wrap the terrain.
  if (j.contains("terrain")) return terrain_from_json(j.at("terrain"));
  return terrain_from_json(j);
}

void save_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::string terrain_hash(const Terrain& t) {
  const std::string s = terrain_to_json(t).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rdv
