#pragma once

// File formats: manipulation scripts, gyroscope logs and JSON-lines traces.
//
// Script:   {"events":[{"type":"rotate","axis":[x,y,z],"angle":r,"steps":n},
//                      {"type":"geodesic","from":[...],"to":[...],"steps":n},
//                      {"type":"fiber","delta":r,"steps":n},
//                      {"type":"field","omega":[...],"t0":a,"t1":b,"dt":h},
//                      {"type":"measure","axis":[...]},
//                      {"type":"annotate","text":"..."}]}
//           A bare array of events is accepted too. "steps" is optional and
//           then derived from --steps-per-degree.
// IMU log:  one {"t":seconds,"gyro":[x,y,z]} per line, body-frame rad/s.
// Trace:    one TraceFrame object per line.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "spinball/dynamics.hpp"
#include "spinball/measurement.hpp"
#include "spinball/path_lift.hpp"
#include "spinball/phase_geometry.hpp"
#include "spinball/spin_state.hpp"

namespace spinball {

using Json = nlohmann::json;

struct RotateEvent {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;
  int steps = 1;
};

struct GeodesicEvent {
  Vec3 from = Vec3::UnitZ();
  Vec3 to = Vec3::UnitZ();
  int steps = 1;
};

// Rotation about the current principal axis.
struct FiberEvent {
  double delta = 0.0;
  int steps = 1;
};

struct FieldEvent {
  FieldSegment segment;
};

struct MeasureEvent {
  Vec3 axis = Vec3::UnitZ();
};

struct AnnotateEvent {
  std::string text;
};

using SessionEvent = std::variant<RotateEvent, GeodesicEvent, FiberEvent, FieldEvent, MeasureEvent, AnnotateEvent>;

struct ScriptOptions {
  // Sub-steps per degree of turn when an event omits "steps".
  double steps_per_degree = 1.0;
};

// Throws ValidationError naming the byte offset (syntax) or the event index
// (schema, lift safety).
std::vector<SessionEvent> parse_script(std::string_view text, const ScriptOptions& options = {});
SessionEvent parse_event(const Json& j, std::size_t index, const ScriptOptions& options = {});
Json to_json(const SessionEvent& event);

// Equal sub-step increments of a rotate event.
std::vector<AxisAngle> sub_steps(const RotateEvent& event);

struct ImuSample {
  double t = 0.0;
  Vec3 gyro = Vec3::Zero();
};

std::vector<ImuSample> parse_imu_log(std::istream& in);
void write_imu_log(std::span<const ImuSample> samples, std::ostream& out);

// One increment per consecutive pair: axis along the averaged rate, angle
// |rate| * dt. Zero-rate intervals give zero-angle increments. Increments
// keep the frame of the log: apply them with Frame::Body for a gyroscope
// mounted in the ball, Frame::World for rates given in the lab frame.
// Throws ValidationError for non-increasing timestamps or a half-turn interval.
std::vector<AxisAngle> integrate_imu(std::span<const ImuSample> samples);

struct TraceFrame {
  std::int64_t index = 0;
  std::int64_t step_count = 0;
  SU2Element orientation;  // quaternion (w >= 0) of the SO(3) orientation
  SU2Element lift;
  Spinor spinor;
  PanelFrame panel;
  BlochPoint bloch;
  Vec3 principal_axis = Vec3::UnitZ();
  std::optional<double> gamma;  // only when the orientation is back at its anchor
  std::optional<MeasurementRecord> measurement;
  std::optional<std::string> annotation;
};

TraceFrame make_frame(const BallState& state, std::int64_t index, double closure_tol = kDefaultClosureTolerance);

// One JSON line per state, indexed from 0.
void emit_trace(std::span<const BallState> states, std::ostream& sink);
void write_frame(const TraceFrame& frame, std::ostream& sink);
std::vector<TraceFrame> parse_trace(std::istream& in);

Json to_json(const Vec3& v);
Json to_json(Complex z);
Json to_json(const Spinor& s);
Json to_json(const SU2Element& q);
Json to_json(const BlochPoint& p);
Json to_json(const PanelFrame& p);
Json to_json(const GeodesicLoop& loop);
Json to_json(const FieldSegment& seg);  // constant segments only
Json to_json(const MeasurementRecord& r);
Json to_json(const HomotopyClass& h);
Json to_json(const PhaseReport& r);
Json to_json(const FrequencyReport& r);
Json to_json(const TraceFrame& f);

Vec3 vec3_from_json(const Json& j, const std::string& what);
Spinor spinor_from_json(const Json& j);
PanelFrame panel_frame_from_json(const Json& j);
GeodesicLoop geodesic_loop_from_json(const Json& j);
FieldSegment field_segment_from_json(const Json& j);
MeasurementRecord measurement_record_from_json(const Json& j);
TraceFrame trace_frame_from_json(const Json& j);

}  // namespace spinball
