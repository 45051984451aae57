#include "spinball/measurement.hpp"

#include <cmath>

#include "spinball/errors.hpp"
#include "spinball/phase_geometry.hpp"
#include "spinball/spin_state.hpp"

namespace spinball {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(splitmix64(seed + stream * 0x9E3779B97F4A7C15ULL)) {}

double Rng::uniform() {
  ++position_;
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

MeasurementResult measure_z(const BallState& state, Rng& rng) {
  const Spinor& s = state.spinor;
  const double p_up = std::norm(s.alpha) / s.norm_squared();

  MeasurementRecord rec;
  rec.axis = Vec3::UnitZ();
  rec.p_up = p_up;
  rec.seed_position = rng.position();
  rec.draw = rng.uniform();
  if (rec.draw < p_up) {
    rec.outcome = 1;
    rec.post_state = {s.alpha / std::abs(s.alpha), Complex{0.0, 0.0}};
  } else {
    rec.outcome = -1;
    rec.post_state = {Complex{0.0, 0.0}, s.beta / std::abs(s.beta)};
  }
  return {rec, reanchor(state, rec.post_state)};
}

MeasurementResult measure_axis(const BallState& state, const Vec3& axis, Rng& rng) {
  const Vec3 n = require_unit(axis, "measurement axis");
  const AxisAngle s = axis_angle(rotation_from_z(n));
  // A half turn (axis = -z) is split so every increment stays liftable.
  const int pieces = s.angle > kPi / 2.0 ? 2 : 1;
  BallState current = state;
  for (int k = 0; k < pieces; ++k) current = step(current, s.axis, -s.angle / pieces);
  MeasurementResult res = measure_z(current, rng);
  for (int k = 0; k < pieces; ++k) res.state = step(res.state, s.axis, s.angle / pieces);
  res.record.axis = n;
  res.record.post_state = res.state.spinor;
  return res;
}

double born_probability(const Spinor& s, const Vec3& axis) {
  const Spinor n = spinor_along(require_unit(axis, "measurement axis"));
  return std::norm(inner(n, s)) / s.norm_squared();
}

FrequencyReport statistics(const Spinor& state, const Vec3& axis, long trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("statistics needs at least one trial");
  const BallState start = init(state);
  Rng rng(seed);
  FrequencyReport r;
  r.trials = trials;
  for (long k = 0; k < trials; ++k) {
    if (measure_axis(start, axis, rng).record.outcome == 1) ++r.ups;
  }
  r.p_hat = static_cast<double>(r.ups) / static_cast<double>(trials);
  r.p_expected = born_probability(state, axis);
  r.std_error = std::sqrt(r.p_expected * (1.0 - r.p_expected) / static_cast<double>(trials));
  r.bound = 5.0 * r.std_error;
  r.pass = std::abs(r.p_hat - r.p_expected) <= r.bound + 1e-12;
  return r;
}

}  // namespace spinball
