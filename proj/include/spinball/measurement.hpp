#pragma once

#include <cstdint>
#include <random>

#include "spinball/path_lift.hpp"

namespace spinball {

// Seedable uniform source. Each (seed, stream) pair drives its own
// std::mt19937_64 seeded with splitmix64(seed + stream * 0x9E3779B97F4A7C15);
// sessions take stream = connection index, parallel statistics runs take
// stream = worker index. Draws are the top 53 bits scaled to [0, 1), so
// sequences are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  double uniform();
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  // Number of draws taken so far.
  std::uint64_t position() const { return position_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Outcome +1 <=> draw < p_up. Carries no pre-measurement amplitudes.
struct MeasurementRecord {
  Vec3 axis = Vec3::UnitZ();
  int outcome = 1;
  double p_up = 1.0;
  double draw = 0.0;
  Spinor post_state;
  std::uint64_t seed_position = 0;
};

struct MeasurementResult {
  MeasurementRecord record;
  BallState state;
};

// Projects on |up> with probability |alpha|^2, else on |down>, keeping the
// phase of the surviving amplitude. The orientation is untouched; the lift is
// re-anchored on the collapsed spinor.
MeasurementResult measure_z(const BallState& state, Rng& rng);

// Rotate by S^dagger (S the meridian rotation z -> axis), measure_z, rotate
// back by S. Throws DomainError for a non-unit axis.
MeasurementResult measure_axis(const BallState& state, const Vec3& axis, Rng& rng);

// |<n|psi>|^2 from the projector, without rotating anything.
double born_probability(const Spinor& s, const Vec3& axis);

struct FrequencyReport {
  long trials = 0;
  long ups = 0;
  double p_hat = 0.0;
  double p_expected = 0.0;
  double std_error = 0.0;  // sqrt(p(1-p)/N)
  double bound = 0.0;      // 5 sigma
  bool pass = false;
};

FrequencyReport statistics(const Spinor& state, const Vec3& axis, long trials, std::uint64_t seed);

}  // namespace spinball
