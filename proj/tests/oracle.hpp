#pragma once

// Brute-force reference computations used to freeze expected values. Nothing
// here calls into the visibility or medial modules; only the plain terrain
// container is shared.

#include <functional>
#include <random>
#include <vector>

#include "rdv/geometry.hpp"

namespace oracle {

using rdv::Point;
using rdv::Terrain;

/// Winding-number containment with a small boundary band counted as inside.
bool inside_closed(const Point& p, const Terrain& t, double band = 1e-7);

/// Dense-sampling segment containment test.
bool segment_inside(const Point& a, const Point& b, const Terrain& t, int samples = 2000);

/// All-pairs (Floyd-Warshall) geodesic distance over vertices + {s, t},
/// visibility by dense sampling.
double geodesic_distance(const Point& s, const Point& t, const Terrain& terrain);

/// Every simple path through the sampled visibility graph whose length is
/// within rel_tol of the geodesic distance, collinear waypoints removed.
std::vector<std::vector<Point>> all_shortest_paths(const Point& s, const Point& t,
                                                   const Terrain& terrain, double rel_tol = 1e-9);

/// Clockwise angle from base to v via polar angles.
double clockwise_angle(const Point& base, const Point& v);

/// Adaptive Simpson quadrature.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

/// Minimum distance from p to a densely sampled boundary (spacing h), and the
/// sampled boundary points within `slack` of that minimum.
struct NearestSamples {
  double distance;
  std::vector<Point> near;
};
NearestSamples nearest_boundary_samples(const Point& p, const rdv::Polygon& poly, double h,
                                        double slack);

/// Deterministic uniform double in [0, 1).
inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

rdv::RigidMotion random_motion(std::mt19937_64& rng, double max_shift = 50);

}  // namespace oracle
