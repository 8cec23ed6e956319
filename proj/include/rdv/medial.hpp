#pragma once

#include <json.hpp>

#include <cstddef>
#include <vector>

#include "rdv/geometry.hpp"

namespace rdv {

/// Equidistance tolerance for axis validation (scaled by the polygon size
/// when the polygon is larger than one unit).
inline constexpr double kEpsMed = 1e-7;

/// A boundary site: edge i (open segment v_i v_{i+1}) or reflex vertex i.
struct MedialSite {
  enum class Kind { Edge, Vertex };
  Kind kind;
  std::size_t index;

  friend bool operator==(const MedialSite&, const MedialSite&) = default;
};

struct MedialNode {
  Point point;
  double radius;
  std::vector<MedialSite> sites;
};

/// Piece of a bisector between two sites, parametrized by tau.
struct MedialEdge {
  enum class Kind { Segment, Parabola };
  Kind kind;
  std::size_t from;
  std::size_t to;
  MedialSite site_a;
  MedialSite site_b;
  double length;

  // Segment: p(tau) = origin + tau * dir.
  // Parabola: p(tau) = origin + tau * dir + h(tau) * normal with
  // h = ((tau - focus_tau)^2 + focus_height^2) / (2 focus_height).
  Point origin;
  Vec2 dir;
  Vec2 normal;
  double focus_tau = 0;
  double focus_height = 0;
  double tau_from;
  double tau_to;

  Point at_tau(double tau) const;
  /// Arc length from tau_from to tau.
  double length_to(double tau) const;
  /// Point at arc length s from the `from` node.
  Point at(double s) const;
};

struct MedialAxisGraph {
  std::vector<MedialNode> nodes;
  std::vector<MedialEdge> edges;
};

/// Medial axis of a simple polygon: a tree of segments and parabolic arcs.
/// Throws NumericFailure when the pieces do not assemble into a tree.
MedialAxisGraph medial_axis(const Polygon& poly);

struct MedialPoint {
  enum class Provenance { CentralNode, MiddleOfCentralEdge };
  Point point;
  Provenance provenance;
};

/// Center of the axis tree after contracting degree-2 chains. Throws
/// NumericFailure for near-degenerate axes (pieces shorter than 10 kEpsMed).
MedialPoint medial_point(const Polygon& poly);
MedialPoint medial_point(const MedialAxisGraph& axis);

nlohmann::ordered_json medial_to_json(const MedialAxisGraph& axis);

}  // namespace rdv
