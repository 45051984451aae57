#include "spinball/phase_geometry.hpp"

#include <cmath>
#include <string>

#include "spinball/errors.hpp"
#include "spinball/spin_state.hpp"

namespace spinball {

namespace {

double triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double num = a.dot(b.cross(c));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

Spinor initial_spinor(const Vec3& principal, Spin spin) {
  return spin == Spin::Up ? spinor_along(principal) : spinor_along(-principal);
}

PhaseReport run_loop(const Vec3& start, std::span<const AxisAngle> increments, Spin spin, double solid,
                     double tolerance) {
  const BallState start_state = anchored(project(rotation_from_z(start)), initial_spinor(start, spin));
  const BallState end_state = apply_increments(start_state, increments);

  const double gap = (end_state.principal_axis - start_state.principal_axis).norm();
  if (gap > 1e-6) {
    throw LoopNotClosed("principal axis does not return to the loop start (gap " + std::to_string(gap) + ")");
  }
  const Complex overlap = inner(start_state.spinor, end_state.spinor);
  if (std::abs(overlap) < 1e-9) throw PhaseUndefined("final state is orthogonal to the initial state");

  PhaseReport r;
  r.overlap_phase = std::arg(overlap);
  r.overlap_magnitude = std::abs(overlap);
  r.solid_angle = solid;
  r.berry_prediction = wrap_angle(spin == Spin::Up ? -solid / 2.0 : solid / 2.0);
  r.tolerance = tolerance;
  r.agrees = std::abs(wrap_angle(r.overlap_phase - r.berry_prediction)) < tolerance;
  if (start_state.orientation.distance(end_state.orientation) < kDefaultClosureTolerance) {
    const BallState ends[] = {start_state, end_state};
    r.homotopy = classify_loop(ends);
  }
  return r;
}

}  // namespace

void validate(const GeodesicLoop& loop) {
  if (loop.samples_per_edge < 8) throw DomainError("samples_per_edge must be at least 8");
  const auto n = loop.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& v = loop.vertices[i];
    if (!v.allFinite() || std::abs(v.norm() - 1.0) > 1e-9) {
      throw DomainError("loop vertex " + std::to_string(i) + " is not a unit vector");
    }
    const Vec3& next = loop.vertices[(i + 1) % n];
    if ((v + next).norm() <= 1e-6) {
      throw AmbiguousGeodesic("loop vertices " + std::to_string(i) + " and " + std::to_string((i + 1) % n) +
                              " are antipodal");
    }
  }
}

GeodesicLoop octant_loop(int samples_per_edge) {
  return {{Vec3::UnitZ(), Vec3::UnitX(), Vec3::UnitY()}, samples_per_edge};
}

std::vector<AxisAngle> geodesic_increments(const Vec3& from, const Vec3& to, int steps) {
  if (steps < 1) throw DomainError("geodesic needs at least one step");
  const Vec3 a = require_unit(from, "geodesic start");
  const Vec3 b = require_unit(to, "geodesic end");
  if ((a + b).norm() <= 1e-6) throw AmbiguousGeodesic("geodesic endpoints are antipodal");
  const Vec3 cross = a.cross(b);
  const double s = cross.norm();
  const double total = std::atan2(s, a.dot(b));
  AxisAngle inc;
  inc.axis = s > 0.0 ? Vec3(cross / s) : Vec3::UnitZ();
  inc.angle = s > 0.0 ? total / steps : 0.0;
  if (!(inc.angle < kMaxStepAngle)) throw StepTooLarge("geodesic step exceeds the half-turn lift bound");
  return std::vector<AxisAngle>(static_cast<std::size_t>(steps), inc);
}

SU2Element rotation_from_z(const Vec3& target) {
  const Vec3 n = require_unit(target, "target direction");
  const Vec3 cross = Vec3::UnitZ().cross(n);
  const double s = cross.norm();
  if (s < 1e-15) {
    return n.z() > 0.0 ? SU2Element::identity() : su2_from_axis_angle(Vec3::UnitX(), kPi);
  }
  return su2_from_axis_angle(cross / s, std::atan2(s, n.z()));
}

double solid_angle(const GeodesicLoop& loop) {
  std::vector<Vec3> v = loop.vertices;
  if (v.size() > 1 && (v.front() - v.back()).norm() < 1e-12) v.pop_back();
  if (v.size() < 3) return 0.0;
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) total += triangle_solid_angle(v[0], v[i], v[i + 1]);
  return total;
}

PhaseReport berry_experiment(const GeodesicLoop& loop, Spin spin, double tolerance) {
  validate(loop);
  if (loop.vertices.empty()) throw DomainError("loop has no vertices");
  std::vector<AxisAngle> increments;
  const auto n = loop.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto edge = geodesic_increments(loop.vertices[i], loop.vertices[(i + 1) % n], loop.samples_per_edge);
    increments.insert(increments.end(), edge.begin(), edge.end());
  }
  return run_loop(loop.vertices.front(), increments, spin, solid_angle(loop), tolerance);
}

std::vector<AxisAngle> parallel_transport_correction(double theta0, int steps) {
  if (!(theta0 > 0.0 && theta0 < kPi)) throw DomainError("latitude circle degenerates at the poles");
  if (steps < 3) throw DomainError("latitude circle needs at least 3 steps");
  const double dphi = kTwoPi / steps;
  const double c = std::cos(theta0);
  const Vec3 p0{std::sin(theta0), 0.0, c};
  const SU2Element turn = su2_from_axis_angle(Vec3::UnitZ(), dphi);
  std::vector<AxisAngle> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    const Vec3 p = project(su2_from_axis_angle(Vec3::UnitZ(), k * dphi)).matrix() * p0;
    // Spin about the principal axis cancels the z-rotation's component along it,
    // leaving an angular velocity orthogonal to p.
    const SU2Element spin = su2_from_axis_angle(p.normalized(), -c * dphi);
    out.push_back(axis_angle(compose(turn, spin)));
  }
  return out;
}

PhaseReport latitude_berry(double theta0, int steps, Spin spin, double tolerance) {
  const auto increments = parallel_transport_correction(theta0, steps);
  const Vec3 start{std::sin(theta0), 0.0, std::cos(theta0)};
  return run_loop(start, increments, spin, kTwoPi * (1.0 - std::cos(theta0)), tolerance);
}

}  // namespace spinball
