#include "spinball/dynamics.hpp"

#include <cmath>
#include <utility>

#include "spinball/errors.hpp"

namespace spinball {

FieldSegment FieldSegment::constant_field(const Vec3& omega, double t0, double t1, double dt) {
  FieldSegment seg;
  seg.constant = omega;
  seg.t0 = t0;
  seg.t1 = t1;
  seg.dt = dt;
  return seg;
}

FieldSegment FieldSegment::varying_field(FieldFunction omega, double t0, double t1, double dt) {
  FieldSegment seg;
  seg.omega = std::move(omega);
  seg.t0 = t0;
  seg.t1 = t1;
  seg.dt = dt;
  return seg;
}

long FieldSegment::steps() const {
  const double n = std::ceil((t1 - t0) / dt - 1e-9);
  return n < 1.0 ? 1 : static_cast<long>(n);
}

void validate(const FieldSegment& seg) {
  if (!(std::isfinite(seg.t0) && std::isfinite(seg.t1) && seg.t1 > seg.t0)) {
    throw DomainError("field segment needs t1 > t0");
  }
  if (!(std::isfinite(seg.dt) && seg.dt > 0.0)) throw DomainError("field segment needs dt > 0");
  if (!seg.constant && !seg.omega) throw DomainError("field segment has no field");
  if (seg.constant && at_lift_limit(*seg.constant, seg.dt)) {
    throw DomainError("field segment violates 2|omega| dt < pi");
  }
}

BallState evolve(const BallState& state, const FieldSegment& seg) {
  validate(seg);
  const long n = seg.steps();
  const double h = seg.step_size();
  BallState s = state;
  for (long k = 0; k < n; ++k) {
    const Vec3 omega = seg.at(seg.t0 + (static_cast<double>(k) + 0.5) * h);
    const double rate = omega.norm();
    if (rate == 0.0) {
      ++s.step_count;
      continue;
    }
    s = step(s, omega / rate, 2.0 * rate * h);
  }
  return s;
}

Vec3 field_to_rotation_rate(const Vec3& omega) { return 2.0 * omega; }

bool at_lift_limit(const Vec3& omega, double dt) { return 2.0 * omega.norm() * dt >= kMaxStepAngle; }

FieldSegment magnetic_hamiltonian(const Vec3& b, double t0, double t1, double dt) {
  return FieldSegment::constant_field(-b, t0, t1, dt);
}

FieldSegment magnetic_hamiltonian(const std::function<Vec3(double)>& b, double t0, double t1, double dt) {
  return FieldSegment::varying_field([b](double t) { return Vec3(-b(t)); }, t0, t1, dt);
}

Spinor evolve_with_trace(const Spinor& s, const FieldSegment& seg, double c) {
  validate(seg);
  const Complex i{0.0, 1.0};
  Mat2c sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, -i, i, 0;
  sz << 1, 0, 0, -1;
  const long n = seg.steps();
  const double h = seg.step_size();
  Eigen::Vector2cd psi{s.alpha, s.beta};
  for (long k = 0; k < n; ++k) {
    const Vec3 omega = seg.at(seg.t0 + (static_cast<double>(k) + 0.5) * h);
    const double rate = omega.norm();
    Mat2c u = Mat2c::Identity();
    if (rate > 0.0) {
      const Mat2c n_sigma = (omega.x() * sx + omega.y() * sy + omega.z() * sz) / rate;
      u = std::cos(rate * h) * Mat2c::Identity() - i * std::sin(rate * h) * n_sigma;
    }
    psi = std::exp(-i * c * h) * (u * psi);
  }
  return {psi(0), psi(1)};
}

TraceShiftReport trace_shift_check(const BallState& state, const FieldSegment& seg, double c) {
  const Spinor plain = evolve(state, seg).spinor;
  const Spinor shifted = evolve_with_trace(state.spinor, seg, c);
  const double span = seg.t1 - seg.t0;
  TraceShiftReport r;
  r.phase = std::arg(inner(plain, shifted));
  r.expected_phase = wrap_angle(-c * span);
  r.deviation = distance(shifted, std::polar(1.0, -c * span) * plain);
  return r;
}

}  // namespace spinball
