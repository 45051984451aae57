#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spinball/session_io.hpp"

namespace spinball {

struct SessionConfig {
  std::uint64_t seed = 0;
  Spinor initial_spinor = Spinor::up();
  Frame imu_mode = Frame::Body;
  double steps_per_degree = 1.0;
  double closure_tol = kDefaultClosureTolerance;
};

Json to_json(const SessionConfig& config);

// A single ball driven event by event. Single owner; not thread-safe.
class Session {
 public:
  explicit Session(const SessionConfig& config, std::uint64_t stream = 0);

  // Applies one event and returns the frame describing the resulting state.
  TraceFrame apply(const SessionEvent& event);
  TraceFrame apply_increment(const AxisAngle& increment, Frame frame);

  TraceFrame frame() const;
  const BallState& state() const { return state_; }
  const BallState& initial_state() const { return initial_; }
  const SessionConfig& config() const { return config_; }
  const std::vector<MeasurementRecord>& measurements() const { return measurements_; }

  // Final spinor, Bloch point, gamma when the orientation has closed, overlap
  // with the anchor spinor, measurement records.
  Json summary() const;

 private:
  SessionConfig config_;
  Rng rng_;
  BallState initial_;
  BallState state_;
  std::int64_t frames_ = 0;
  std::int64_t events_ = 0;
  std::vector<MeasurementRecord> measurements_;
};

// Writes the initial frame and one frame per event; returns the summary.
// Errors are rethrown with the failing event index.
Json run_script(std::span<const SessionEvent> events, const SessionConfig& config, std::ostream& trace);

// Writes the initial frame and one frame per IMU interval; returns the summary.
Json replay_imu(std::span<const ImuSample> samples, const SessionConfig& config, std::ostream& trace);

// Runs the script and classifies the initial -> final orientation loop.
// Throws LoopNotClosed when the script does not return to the start.
HomotopyClass classify_script(std::span<const SessionEvent> events, const SessionConfig& config);

// Live protocol. The server greets with hello_message(); afterwards every
// incoming line gets exactly one reply line: {"type":"frame",...} for an
// event, {"type":"hello",...} for {"type":"hello"}, {"type":"error",...} for
// anything malformed (the session survives).
std::string hello_message(const Session& session);
std::string handle_message(Session& session, std::string_view line);

}  // namespace spinball
