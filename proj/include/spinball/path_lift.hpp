#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spinball/rotor.hpp"

namespace spinball {

// A single lifted increment must stay below a half turn by this margin.
inline constexpr double kMaxStepAngle = kPi - 1e-6;
inline constexpr double kDefaultClosureTolerance = 1e-6;

// World increments left-multiply the orientation; body increments right-multiply it
// (the axis is expressed in the ball's own frame, as a gyroscope reports it).
enum class Frame { World, Body };

// Orientation of the ball together with its continuous SU(2) lift.
//
// The lift is measured from an anchor (initially the identity orientation and
// the initial spinor). A measurement collapse re-anchors: the anchor becomes
// the current orientation and the collapsed spinor, the lift restarts at the
// identity. Invariants, within integration tolerance:
//   project(lift) ∘ anchor_orientation == orientation
//   apply(lift, anchor_spinor)         == spinor
//   rotate_vector(orientation, z)      == principal_axis
struct BallState {
  SO3Element orientation;
  SU2Element lift;
  Spinor spinor;
  Vec3 principal_axis = Vec3::UnitZ();
  std::int64_t step_count = 0;

  SO3Element anchor_orientation;
  Spinor anchor_spinor;
};

struct HomotopyClass {
  bool is_trivial = true;
  int endpoint_sign = 1;
  double gamma = 0.0;  // 0 or pi
};

// Throws DomainError for an unnormalized spinor.
BallState init(const Spinor& initial = Spinor::up());

// State with the given orientation and spinor taken as the lift anchor.
BallState anchored(const SO3Element& orientation, const Spinor& spinor);

// Collapse helper: keeps the orientation, makes `spinor` the new anchor.
BallState reanchor(const BallState& state, const Spinor& spinor);

// Rotates the ball by `angle` about `axis` and lifts the increment to the
// SU(2) element nearest the identity. Throws StepTooLarge when
// |angle| >= pi - 1e-6.
BallState step(const BallState& state, const Vec3& axis, double angle, Frame frame = Frame::World);
inline BallState step(const BallState& state, const AxisAngle& inc, Frame frame = Frame::World) {
  return step(state, inc.axis, inc.angle, frame);
}

BallState apply_increments(const BallState& state, std::span<const AxisAngle> increments,
                           Frame frame = Frame::World);

// Lifts a sampled orientation path. Sample k is reached from sample k-1 (or
// from initial.orientation for k = 0) through relative(); one state per sample.
std::vector<BallState> lift_path(std::span<const SO3Element> orientations, const BallState& initial);

// Throws LoopNotClosed when the first and last orientations differ by more
// than closure_tol (Frobenius norm).
HomotopyClass classify_loop(std::span<const BallState> states, double closure_tol = kDefaultClosureTolerance);

}  // namespace spinball
