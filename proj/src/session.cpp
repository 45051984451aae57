#include "spinball/session.hpp"

#include <cmath>
#include <ostream>

#include "spinball/errors.hpp"

namespace spinball {

namespace {

Json frame_message(const TraceFrame& frame) {
  Json j = to_json(frame);
  j["type"] = "frame";
  return j;
}

template <class Fn>
void with_event_context(std::size_t index, Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    throw ValidationError("event " + std::to_string(index) + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError("event " + std::to_string(index) + ": " + e.what());
  } catch (const Error& e) {
    throw Error("event " + std::to_string(index) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const SessionConfig& config) {
  return {{"seed", config.seed},
          {"initial", to_json(config.initial_spinor)},
          {"imu_mode", config.imu_mode == Frame::Body ? "body" : "world"},
          {"steps_per_degree", config.steps_per_degree},
          {"closure_tol", config.closure_tol}};
}

Session::Session(const SessionConfig& config, std::uint64_t stream)
    : config_(config), rng_(config.seed, stream), initial_(init(config.initial_spinor)), state_(initial_) {}

TraceFrame Session::frame() const { return make_frame(state_, frames_, config_.closure_tol); }

TraceFrame Session::apply(const SessionEvent& event) {
  ++events_;
  std::optional<MeasurementRecord> record;
  std::optional<std::string> note;
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, RotateEvent>) {
          for (const auto& inc : sub_steps(e)) state_ = step(state_, inc);
        } else if constexpr (std::is_same_v<T, GeodesicEvent>) {
          for (const auto& inc : geodesic_increments(e.from, e.to, e.steps)) state_ = step(state_, inc);
        } else if constexpr (std::is_same_v<T, FiberEvent>) {
          for (int k = 0; k < e.steps; ++k) state_ = step(state_, state_.principal_axis, e.delta / e.steps);
        } else if constexpr (std::is_same_v<T, FieldEvent>) {
          state_ = evolve(state_, e.segment);
        } else if constexpr (std::is_same_v<T, MeasureEvent>) {
          MeasurementResult res = measure_axis(state_, e.axis, rng_);
          state_ = res.state;
          record = res.record;
          measurements_.push_back(res.record);
        } else {
          note = e.text;
        }
      },
      event);
  ++frames_;
  TraceFrame f = frame();
  f.measurement = record;
  f.annotation = note;
  return f;
}

TraceFrame Session::apply_increment(const AxisAngle& increment, Frame frame_kind) {
  state_ = step(state_, increment, frame_kind);
  ++frames_;
  return frame();
}

Json Session::summary() const {
  const TraceFrame f = frame();
  Json j = {{"events", events_},
            {"step_count", state_.step_count},
            {"seed", config_.seed},
            {"final_spinor", to_json(state_.spinor)},
            {"bloch", to_json(f.bloch)},
            {"principal_axis", to_json(state_.principal_axis)},
            {"orientation", to_json(f.orientation)},
            {"panel", to_json(f.panel)},
            {"gamma", f.gamma ? Json(*f.gamma) : Json(nullptr)}};
  const Complex overlap = inner(state_.anchor_spinor, state_.spinor);
  j["overlap_magnitude"] = std::abs(overlap);
  j["overlap_phase"] = std::abs(overlap) > 1e-9 ? Json(std::arg(overlap)) : Json(nullptr);
  Json records = Json::array();
  for (const auto& r : measurements_) records.push_back(to_json(r));
  j["measurements"] = records;
  return j;
}

Json run_script(std::span<const SessionEvent> events, const SessionConfig& config, std::ostream& trace) {
  Session session(config);
  write_frame(session.frame(), trace);
  for (std::size_t i = 0; i < events.size(); ++i) {
    with_event_context(i, [&] { write_frame(session.apply(events[i]), trace); });
  }
  return session.summary();
}

Json replay_imu(std::span<const ImuSample> samples, const SessionConfig& config, std::ostream& trace) {
  const std::vector<AxisAngle> increments = integrate_imu(samples);
  Session session(config);
  write_frame(session.frame(), trace);
  for (const auto& inc : increments) write_frame(session.apply_increment(inc, config.imu_mode), trace);
  return session.summary();
}

HomotopyClass classify_script(std::span<const SessionEvent> events, const SessionConfig& config) {
  Session session(config);
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (std::holds_alternative<MeasureEvent>(events[i])) {
      throw ValidationError("event " + std::to_string(i) + ": a measurement breaks the continuous lift of a loop");
    }
    with_event_context(i, [&] { session.apply(events[i]); });
  }
  const BallState ends[] = {session.initial_state(), session.state()};
  return classify_loop(ends, config.closure_tol);
}

std::string hello_message(const Session& session) {
  Json j = {{"type", "hello"}, {"config", to_json(session.config())}, {"frame", to_json(session.frame())}};
  return j.dump();
}

std::string handle_message(Session& session, std::string_view line) {
  Json msg;
  try {
    msg = Json::parse(line.begin(), line.end());
  } catch (const Json::parse_error& e) {
    return Json{{"type", "error"}, {"message", std::string("JSON syntax error at byte ") + std::to_string(e.byte)}}
        .dump();
  }
  if (msg.is_object() && msg.contains("type") && msg.at("type") == "hello") return hello_message(session);
  try {
    const SessionEvent event = parse_event(msg, 0, ScriptOptions{session.config().steps_per_degree});
    return frame_message(session.apply(event)).dump();
  } catch (const std::exception& e) {
    return Json{{"type", "error"}, {"message", e.what()}}.dump();
  }
}

}  // namespace spinball
