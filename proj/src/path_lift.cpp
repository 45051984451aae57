#include "spinball/path_lift.hpp"

#include <cmath>
#include <string>

#include "spinball/errors.hpp"

namespace spinball {

BallState init(const Spinor& initial) {
  if (!initial.is_normalized()) throw DomainError("initial spinor is not normalized");
  return anchored(SO3Element::identity(), initial);
}

BallState anchored(const SO3Element& orientation, const Spinor& spinor) {
  if (!spinor.is_normalized()) throw DomainError("anchor spinor is not normalized");
  BallState s;
  s.orientation = orientation;
  s.lift = SU2Element::identity();
  s.spinor = spinor;
  s.principal_axis = rotate_vector(orientation, Vec3::UnitZ());
  s.anchor_orientation = orientation;
  s.anchor_spinor = spinor;
  return s;
}

BallState reanchor(const BallState& state, const Spinor& spinor) {
  BallState s = anchored(state.orientation, spinor);
  s.step_count = state.step_count;
  return s;
}

BallState step(const BallState& state, const Vec3& axis, double angle, Frame frame) {
  if (!(std::abs(angle) < kMaxStepAngle)) {
    throw StepTooLarge("increment of " + std::to_string(angle) + " rad reaches the half-turn lift bound");
  }
  if (angle == 0.0) {
    BallState s = state;
    ++s.step_count;
    return s;
  }
  Vec3 world_axis = require_unit(axis, "increment axis");
  // R * exp(body) == exp(R body R^T) * R, so a body increment is a world
  // increment about the rotated axis.
  if (frame == Frame::Body) world_axis = rotate_vector(state.orientation, world_axis).normalized();

  BallState s = state;
  s.orientation = compose(so3_from_axis_angle(world_axis, angle), state.orientation);
  const SU2Element inc = su2_from_axis_angle(world_axis, angle);
  s.lift = compose(inc, state.lift);
  s.spinor = apply(inc, state.spinor);
  s.principal_axis = rotate_vector(s.orientation, Vec3::UnitZ());
  ++s.step_count;
  return s;
}

BallState apply_increments(const BallState& state, std::span<const AxisAngle> increments, Frame frame) {
  BallState s = state;
  for (const auto& inc : increments) s = step(s, inc, frame);
  return s;
}

std::vector<BallState> lift_path(std::span<const SO3Element> orientations, const BallState& initial) {
  std::vector<BallState> out;
  out.reserve(orientations.size());
  BallState current = initial;
  for (const auto& target : orientations) {
    const AxisAngle inc = relative(current.orientation, target);
    current = step(current, inc);
    out.push_back(current);
  }
  return out;
}

HomotopyClass classify_loop(std::span<const BallState> states, double closure_tol) {
  if (states.empty()) throw LoopNotClosed("empty path");
  const BallState& first = states.front();
  const BallState& last = states.back();
  const double gap = first.orientation.distance(last.orientation);
  if (gap > closure_tol) {
    throw LoopNotClosed("loop endpoints differ by " + std::to_string(gap) + " (Frobenius)");
  }
  HomotopyClass h;
  h.endpoint_sign = last.lift.dot(first.lift) >= 0.0 ? 1 : -1;
  h.is_trivial = h.endpoint_sign == 1;
  h.gamma = h.is_trivial ? 0.0 : kPi;
  return h;
}

}  // namespace spinball
