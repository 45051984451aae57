#pragma once

#include <optional>
#include <span>
#include <vector>

#include "spinball/path_lift.hpp"

namespace spinball {

inline constexpr int kDefaultSamplesPerEdge = 90;
inline constexpr double kBerryTolerance = 1e-6;

// Closed loop of great-circle arcs traced by the principal axis. The closing
// edge back to vertices.front() is implied.
struct GeodesicLoop {
  std::vector<Vec3> vertices;
  int samples_per_edge = kDefaultSamplesPerEdge;
};

enum class Spin { Up, Down };

struct PhaseReport {
  double overlap_phase = 0.0;     // arg <psi_initial|psi_final>
  double overlap_magnitude = 0.0;
  double solid_angle = 0.0;       // signed, counterclockwise seen from outside > 0
  double berry_prediction = 0.0;  // -solid/2 for Up, +solid/2 for Down, wrapped
  double tolerance = kBerryTolerance;
  bool agrees = false;
  // Present when the full orientation (not just the principal axis) closes.
  std::optional<HomotopyClass> homotopy;
};

// Throws DomainError (non-unit vertex, samples_per_edge < 8) or
// AmbiguousGeodesic (antipodal consecutive vertices).
void validate(const GeodesicLoop& loop);

// The octant loop z -> x -> y -> z.
GeodesicLoop octant_loop(int samples_per_edge = kDefaultSamplesPerEdge);

// `steps` equal world-frame increments about (from x to)/|from x to| that carry
// `from` to `to` along the great circle. Throws AmbiguousGeodesic for
// antipodal endpoints.
std::vector<AxisAngle> geodesic_increments(const Vec3& from, const Vec3& to, int steps);

// Single rotation taking z to `target` along the meridian; for target = -z a
// half turn about x.
SU2Element rotation_from_z(const Vec3& target);

// Signed spherical area, fan-triangulated from vertex 0 with
// tan(E/2) = a·(b×c) / (1 + a·b + b·c + c·a). Never lifts anything.
double solid_angle(const GeodesicLoop& loop);

// Parallel-transports the ball around the loop starting with the principal
// axis on vertices.front() and the spinor up (down) along it.
// Throws LoopNotClosed, PhaseUndefined.
PhaseReport berry_experiment(const GeodesicLoop& loop, Spin spin, double tolerance = kBerryTolerance);

// Increments moving the principal axis once around the circle of polar angle
// theta0 (counterclockwise about z) while counter-rotating about the
// principal axis so that the transverse frame is parallel-transported.
// Starts at (sin theta0, 0, cos theta0). Throws DomainError at the poles.
std::vector<AxisAngle> parallel_transport_correction(double theta0, int steps);

// berry_experiment along a latitude circle; the solid angle is the cap area
// 2pi(1 - cos theta0).
PhaseReport latitude_berry(double theta0, int steps, Spin spin, double tolerance = 1e-4);

}  // namespace spinball
