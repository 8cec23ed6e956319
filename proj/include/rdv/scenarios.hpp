#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rdv/protocols.hpp"
#include "rdv/terrain_io.hpp"

namespace rdv {

struct Scenario {
  Terrain terrain;
  AgentConfig agent1;
  AgentConfig agent2;
  Algorithm algorithm = Algorithm::Rvo;
  std::optional<double> expected_D;
  /// Generator-specific facts (rectangle counts, slice indices, ...).
  Json metadata = Json::object();
};

/// Concentric regular hexagons (outer side y+2, obstacle side y). Agents sit
/// on the obstacle at the midpoints of opposite sides, compasses opposed.
Scenario hexagon_terrain(double y, int rotation_index = 0);

/// Two rosettes (k-gon of apothem D/8 with a 3D/8 rectangle on every side)
/// glued along one rectangle each; agents at the two k-gon centres.
Scenario double_pie(double D, int k = 8);

struct RandomTerrainOptions {
  /// Puts the first obstacle around the medial point of the outer polygon.
  bool obstacle_at_medial_point = false;
  int max_obstacle_vertices = 8;
};

Scenario random_terrain(std::uint64_t seed, int outer_vertices, int n_obstacles,
                        const RandomTerrainOptions& options = {});

/// 10x10 square with a 2x2 obstacle in the middle.
Scenario square_with_center_obstacle();

/// square_with_center_obstacle | hexagon:Y[:ROT] | double_pie:D[:K] |
/// random:SEED:OUTER:OBSTACLES[:medial]
Scenario scenario_from_spec(const std::string& spec);

Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

Json agent_to_json(const AgentConfig& a);
AgentConfig agent_from_json(const Json& j);

}  // namespace rdv
