#pragma once

#include <json.hpp>

#include <string>

#include "rdv/geometry.hpp"

namespace rdv {

using Json = nlohmann::ordered_json;

/// `{"outer": [[x,y],...], "obstacles": [[[x,y],...], ...]}`; vertex order on
/// input is arbitrary. Throws ParseError on malformed input and
/// InvalidTerrain on geometric violations.
Terrain terrain_from_json(const Json& j);
Json terrain_to_json(const Terrain& t);

Terrain load_terrain(const std::string& path);
void save_json(const Json& j, const std::string& path);
Json load_json(const std::string& path);

Json point_to_json(const Point& p);
Point point_from_json(const Json& j);

/// Rounds to 12 significant digits, the precision of every emitted report.
double round12(double v);

/// FNV-1a over the canonical terrain dump, as 16 hex digits.
std::string terrain_hash(const Terrain& t);

}  // namespace rdv
