#pragma once

#include <functional>
#include <optional>

#include "spinball/path_lift.hpp"

namespace spinball {

// Omega(t) of d|psi>/dt = -i Omega(t)·sigma |psi>, hbar = 1, rad/s.
using FieldFunction = std::function<Vec3(double)>;

struct FieldSegment {
  FieldFunction omega;
  std::optional<Vec3> constant;  // set for constant segments (serializable)
  double t0 = 0.0;
  double t1 = 0.0;
  double dt = 0.0;

  static FieldSegment constant_field(const Vec3& omega, double t0, double t1, double dt);
  static FieldSegment varying_field(FieldFunction omega, double t0, double t1, double dt);

  Vec3 at(double t) const { return constant ? *constant : omega(t); }
  // Number of midpoint steps; the step actually used is (t1 - t0) / steps() <= dt.
  long steps() const;
  double step_size() const { return (t1 - t0) / static_cast<double>(steps()); }
};

// Throws DomainError unless t1 > t0, dt > 0 and, for constant segments,
// 2|Omega| dt < pi.
void validate(const FieldSegment& seg);

// Midpoint exponential: each step rotates the ball by 2|Omega(t_mid)| h about
// Omega(t_mid)/|Omega(t_mid)| through step(). Zero-field steps are identities.
// Throws StepTooLarge when a step reaches the half-turn bound.
BallState evolve(const BallState& state, const FieldSegment& seg);

// Angular velocity of the ball whose lift generates H = Omega·sigma.
Vec3 field_to_rotation_rate(const Vec3& omega);

// True when 2|Omega| dt reaches the per-step lift bound.
bool at_lift_limit(const Vec3& omega, double dt);

// H = -B·sigma realized with Omega = -B.
FieldSegment magnetic_hamiltonian(const Vec3& b, double t0, double t1, double dt);
FieldSegment magnetic_hamiltonian(const std::function<Vec3(double)>& b, double t0, double t1, double dt);

struct TraceShiftReport {
  double phase = 0.0;           // arg <psi_H | psi_{H+cI}>
  double expected_phase = 0.0;  // -c (t1 - t0), wrapped
  double deviation = 0.0;       // |psi_{H+cI} - e^{-ic(t1-t0)} psi_H|_max
};

// Evolves the spinor directly with exp(-i h (c I + Omega·sigma)) built from
// Pauli matrices (no rotation of the ball involved).
Spinor evolve_with_trace(const Spinor& s, const FieldSegment& seg, double c);

// Compares evolve() under H with evolve_with_trace() under H + cI.
TraceShiftReport trace_shift_check(const BallState& state, const FieldSegment& seg, double c);

}  // namespace spinball
