#include "spinball/session_io.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "spinball/errors.hpp"

namespace spinball {

namespace {

constexpr double kDegree = kPi / 180.0;

[[noreturn]] void fail(const std::string& context, const std::string& message) {
  throw ValidationError(context + ": " + message);
}

double number(const Json& j, const char* key, const std::string& context) {
  if (!j.contains(key)) fail(context, std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number()) fail(context, std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(context, std::string("field '") + key + "' must be finite");
  return d;
}

Vec3 vec3_field(const Json& j, const char* key, const std::string& context) {
  if (!j.contains(key)) fail(context, std::string("missing field '") + key + "'");
  return vec3_from_json(j.at(key), context + "." + key);
}

Vec3 unit_field(const Json& j, const char* key, const std::string& context) {
  const Vec3 v = vec3_field(j, key, context);
  const double n = v.norm();
  if (std::abs(n - 1.0) > 1e-6) fail(context, std::string("field '") + key + "' must be a unit vector");
  return v / n;
}

int steps_field(const Json& j, double angle, const ScriptOptions& options, const std::string& context) {
  if (!j.contains("steps")) {
    const double n = std::ceil(std::abs(angle) / kDegree * options.steps_per_degree - 1e-9);
    return n < 1.0 ? 1 : static_cast<int>(n);
  }
  const Json& v = j.at("steps");
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 100000000) {
    fail(context, "field 'steps' must be a positive integer");
  }
  return static_cast<int>(v.get<long long>());
}

void check_step(double angle, int steps, const std::string& context) {
  if (!(std::abs(angle) / steps < kMaxStepAngle)) {
    fail(context, "per-step angle " + std::to_string(std::abs(angle) / steps) +
                      " rad reaches the half-turn lift bound; use more steps");
  }
}

Complex complex_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError(what + ": expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Rgb rgb_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw ValidationError(what + ": expected [r, g, b]");
  Rgb c{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j[i].is_number_integer() || j[i].get<int>() < 0 || j[i].get<int>() > 255) {
      throw ValidationError(what + ": components must be integers in [0, 255]");
    }
    c[i] = static_cast<std::uint8_t>(j[i].get<int>());
  }
  return c;
}

SU2Element quaternion_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 4) throw ValidationError(what + ": expected [w, x, y, z]");
  for (const auto& c : j) {
    if (!c.is_number()) throw ValidationError(what + ": expected [w, x, y, z]");
  }
  try {
    return SU2Element::from_unit_components(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                                            j[3].get<double>());
  } catch (const DomainError& e) {
    throw ValidationError(what + ": " + e.what());
  }
}

}  // namespace

Vec3 vec3_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw ValidationError(what + ": expected an array of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw ValidationError(what + ": expected an array of 3 numbers");
    v[i] = j[i].get<double>();
  }
  if (!v.allFinite()) throw ValidationError(what + ": components must be finite");
  return v;
}

SessionEvent parse_event(const Json& j, std::size_t index, const ScriptOptions& options) {
  std::string context = "event " + std::to_string(index);
  if (!j.is_object()) fail(context, "must be an object");
  if (!j.contains("type") || !j.at("type").is_string()) fail(context, "missing string field 'type'");
  const std::string type = j.at("type").get<std::string>();
  context += " (" + type + ")";

  if (type == "rotate") {
    RotateEvent e;
    e.axis = unit_field(j, "axis", context);
    e.angle = number(j, "angle", context);
    e.steps = steps_field(j, e.angle, options, context);
    check_step(e.angle, e.steps, context);
    return e;
  }
  if (type == "geodesic") {
    GeodesicEvent e;
    e.from = unit_field(j, "from", context);
    e.to = unit_field(j, "to", context);
    if ((e.from + e.to).norm() <= 1e-6) fail(context, "endpoints are antipodal; the great circle is ambiguous");
    const double arc = std::atan2(e.from.cross(e.to).norm(), e.from.dot(e.to));
    e.steps = steps_field(j, arc, options, context);
    check_step(arc, e.steps, context);
    return e;
  }
  if (type == "fiber") {
    FiberEvent e;
    e.delta = number(j, "delta", context);
    e.steps = steps_field(j, e.delta, options, context);
    check_step(e.delta, e.steps, context);
    return e;
  }
  if (type == "field") {
    FieldEvent e;
    e.segment = FieldSegment::constant_field(vec3_field(j, "omega", context), number(j, "t0", context),
                                             number(j, "t1", context), number(j, "dt", context));
    try {
      validate(e.segment);
    } catch (const DomainError& err) {
      fail(context, err.what());
    }
    return e;
  }
  if (type == "measure") {
    MeasureEvent e;
    e.axis = j.contains("axis") ? unit_field(j, "axis", context) : Vec3::UnitZ();
    return e;
  }
  if (type == "annotate") {
    AnnotateEvent e;
    if (!j.contains("text") || !j.at("text").is_string()) fail(context, "missing string field 'text'");
    e.text = j.at("text").get<std::string>();
    return e;
  }
  fail(context, "unknown event type");
}

std::vector<SessionEvent> parse_script(std::string_view text, const ScriptOptions& options) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ValidationError("script: JSON syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  const Json* events = &doc;
  if (doc.is_object()) {
    if (!doc.contains("events")) throw ValidationError("script: missing field 'events'");
    events = &doc.at("events");
  }
  if (!events->is_array()) throw ValidationError("script: 'events' must be an array");
  std::vector<SessionEvent> out;
  out.reserve(events->size());
  for (std::size_t i = 0; i < events->size(); ++i) out.push_back(parse_event((*events)[i], i, options));
  return out;
}

Json to_json(const SessionEvent& event) {
  return std::visit(
      [](const auto& e) -> Json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, RotateEvent>) {
          return {{"type", "rotate"}, {"axis", to_json(e.axis)}, {"angle", e.angle}, {"steps", e.steps}};
        } else if constexpr (std::is_same_v<T, GeodesicEvent>) {
          return {{"type", "geodesic"}, {"from", to_json(e.from)}, {"to", to_json(e.to)}, {"steps", e.steps}};
        } else if constexpr (std::is_same_v<T, FiberEvent>) {
          return {{"type", "fiber"}, {"delta", e.delta}, {"steps", e.steps}};
        } else if constexpr (std::is_same_v<T, FieldEvent>) {
          Json j = to_json(e.segment);
          j["type"] = "field";
          return j;
        } else if constexpr (std::is_same_v<T, MeasureEvent>) {
          return {{"type", "measure"}, {"axis", to_json(e.axis)}};
        } else {
          return {{"type", "annotate"}, {"text", e.text}};
        }
      },
      event);
}

std::vector<AxisAngle> sub_steps(const RotateEvent& event) {
  return std::vector<AxisAngle>(static_cast<std::size_t>(event.steps), AxisAngle{event.axis, event.angle / event.steps});
}

std::vector<ImuSample> parse_imu_log(std::istream& in) {
  std::vector<ImuSample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string context = "imu log line " + std::to_string(line_no);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ValidationError(context + ": JSON syntax error at byte " + std::to_string(e.byte));
    }
    if (!j.is_object()) fail(context, "must be an object");
    ImuSample s;
    s.t = number(j, "t", context);
    s.gyro = vec3_field(j, "gyro", context);
    out.push_back(s);
  }
  return out;
}

void write_imu_log(std::span<const ImuSample> samples, std::ostream& out) {
  for (const auto& s : samples) out << Json{{"t", s.t}, {"gyro", to_json(s.gyro)}}.dump() << '\n';
}

std::vector<AxisAngle> integrate_imu(std::span<const ImuSample> samples) {
  std::vector<AxisAngle> out;
  if (samples.size() < 2) return out;
  out.reserve(samples.size() - 1);
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double dt = samples[k].t - samples[k - 1].t;
    if (!(dt > 0.0)) {
      throw ValidationError("imu sample " + std::to_string(k) + ": timestamps must be strictly increasing");
    }
    const Vec3 rate = 0.5 * (samples[k].gyro + samples[k - 1].gyro);
    const double r = rate.norm();
    AxisAngle inc;
    if (r > 0.0) {
      inc.axis = rate / r;
      inc.angle = r * dt;
    }
    if (!(inc.angle < kMaxStepAngle)) {
      throw ValidationError("imu interval " + std::to_string(k) + ": rotation reaches the half-turn lift bound");
    }
    out.push_back(inc);
  }
  return out;
}

TraceFrame make_frame(const BallState& state, std::int64_t index, double closure_tol) {
  TraceFrame f;
  f.index = index;
  f.step_count = state.step_count;
  f.orientation = nearest_lift(state.orientation);
  f.lift = state.lift;
  f.spinor = state.spinor;
  f.panel = panel_frame(state.spinor);
  f.bloch = bloch_point(state.spinor);
  f.principal_axis = state.principal_axis;
  if (state.orientation.distance(state.anchor_orientation) <= closure_tol) {
    f.gamma = state.lift.w() >= 0.0 ? 0.0 : kPi;
  }
  return f;
}

void write_frame(const TraceFrame& frame, std::ostream& sink) {
  sink << to_json(frame).dump() << '\n';
  if (!sink) throw Error("trace sink write failed");
}

void emit_trace(std::span<const BallState> states, std::ostream& sink) {
  std::int64_t i = 0;
  for (const auto& s : states) write_frame(make_frame(s, i++), sink);
}

std::vector<TraceFrame> parse_trace(std::istream& in) {
  std::vector<TraceFrame> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(trace_frame_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw ValidationError("trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

Json to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Spinor& s) { return Json::array({to_json(s.alpha), to_json(s.beta)}); }

Json to_json(const SU2Element& q) { return Json::array({q.w(), q.x(), q.y(), q.z()}); }

Json to_json(const BlochPoint& p) {
  return {{"theta", p.theta}, {"phi", p.phi}, {"vector", to_json(p.unit_vector)}};
}

Json to_json(const PanelFrame& p) {
  return {{"pentagon", p.pentagon}, {"hexagon", p.hexagon}, {"alpha", to_json(p.alpha)}, {"beta", to_json(p.beta)}};
}

Json to_json(const GeodesicLoop& loop) {
  Json vertices = Json::array();
  for (const auto& v : loop.vertices) vertices.push_back(to_json(v));
  return {{"vertices", vertices}, {"samples_per_edge", loop.samples_per_edge}};
}

Json to_json(const FieldSegment& seg) {
  if (!seg.constant) throw DomainError("only constant field segments are serializable");
  return {{"omega", to_json(*seg.constant)}, {"t0", seg.t0}, {"t1", seg.t1}, {"dt", seg.dt}};
}

Json to_json(const MeasurementRecord& r) {
  return {{"axis", to_json(r.axis)},     {"outcome", r.outcome},
          {"p_up", r.p_up},              {"draw", r.draw},
          {"post_state", to_json(r.post_state)}, {"seed_position", r.seed_position}};
}

Json to_json(const HomotopyClass& h) {
  return {{"is_trivial", h.is_trivial}, {"endpoint_sign", h.endpoint_sign}, {"gamma", h.gamma}};
}

Json to_json(const PhaseReport& r) {
  Json j = {{"overlap_phase", r.overlap_phase},
            {"overlap_magnitude", r.overlap_magnitude},
            {"solid_angle", r.solid_angle},
            {"berry_prediction", r.berry_prediction},
            {"tolerance", r.tolerance},
            {"agrees", r.agrees}};
  if (r.homotopy) j["homotopy"] = to_json(*r.homotopy);
  return j;
}

Json to_json(const FrequencyReport& r) {
  return {{"trials", r.trials},         {"ups", r.ups},       {"p_hat", r.p_hat},
          {"p_expected", r.p_expected}, {"std_error", r.std_error}, {"bound", r.bound},
          {"pass", r.pass}};
}

Json to_json(const TraceFrame& f) {
  Json j = {{"index", f.index},
            {"step_count", f.step_count},
            {"orientation", to_json(f.orientation)},
            {"lift", to_json(f.lift)},
            {"spinor", to_json(f.spinor)},
            {"panel", to_json(f.panel)},
            {"bloch", to_json(f.bloch)},
            {"principal_axis", to_json(f.principal_axis)},
            {"gamma", f.gamma ? Json(*f.gamma) : Json(nullptr)}};
  if (f.measurement) j["measurement"] = to_json(*f.measurement);
  if (f.annotation) j["annotation"] = *f.annotation;
  return j;
}

Spinor spinor_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("spinor: expected [[re, im], [re, im]]");
  const Spinor s{complex_from_json(j[0], "spinor.alpha"), complex_from_json(j[1], "spinor.beta")};
  if (!s.is_normalized()) throw ValidationError("spinor: not normalized");
  return s;
}

PanelFrame panel_frame_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("panel: expected an object");
  PanelFrame p;
  p.pentagon = rgb_from_json(j.at("pentagon"), "panel.pentagon");
  p.hexagon = rgb_from_json(j.at("hexagon"), "panel.hexagon");
  p.alpha = complex_from_json(j.at("alpha"), "panel.alpha");
  p.beta = complex_from_json(j.at("beta"), "panel.beta");
  return p;
}

GeodesicLoop geodesic_loop_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.at("vertices").is_array()) {
    throw ValidationError("loop: expected {\"vertices\": [[x,y,z], ...], \"samples_per_edge\": n}");
  }
  GeodesicLoop loop;
  const Json& vs = j.at("vertices");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Vec3 v = vec3_from_json(vs[i], "loop.vertices[" + std::to_string(i) + "]");
    if (std::abs(v.norm() - 1.0) > 1e-6) {
      throw ValidationError("loop.vertices[" + std::to_string(i) + "]: must be a unit vector");
    }
    loop.vertices.push_back(v.normalized());
  }
  if (j.contains("samples_per_edge")) {
    if (!j.at("samples_per_edge").is_number_integer()) throw ValidationError("loop.samples_per_edge: integer expected");
    loop.samples_per_edge = j.at("samples_per_edge").get<int>();
  }
  if (loop.samples_per_edge < 8) throw ValidationError("loop.samples_per_edge: must be at least 8");
  return loop;
}

FieldSegment field_segment_from_json(const Json& j) {
  const std::string context = "field segment";
  if (!j.is_object()) fail(context, "expected an object");
  FieldSegment seg = FieldSegment::constant_field(vec3_field(j, "omega", context), number(j, "t0", context),
                                                  number(j, "t1", context), number(j, "dt", context));
  try {
    validate(seg);
  } catch (const DomainError& e) {
    fail(context, e.what());
  }
  return seg;
}

MeasurementRecord measurement_record_from_json(const Json& j) {
  MeasurementRecord r;
  r.axis = vec3_from_json(j.at("axis"), "measurement.axis");
  r.outcome = j.at("outcome").get<int>();
  r.p_up = j.at("p_up").get<double>();
  r.draw = j.at("draw").get<double>();
  r.post_state = spinor_from_json(j.at("post_state"));
  r.seed_position = j.at("seed_position").get<std::uint64_t>();
  return r;
}

TraceFrame trace_frame_from_json(const Json& j) {
  TraceFrame f;
  f.index = j.at("index").get<std::int64_t>();
  f.step_count = j.at("step_count").get<std::int64_t>();
  f.orientation = quaternion_from_json(j.at("orientation"), "frame.orientation");
  f.lift = quaternion_from_json(j.at("lift"), "frame.lift");
  f.spinor = spinor_from_json(j.at("spinor"));
  f.panel = panel_frame_from_json(j.at("panel"));
  const Json& b = j.at("bloch");
  f.bloch.theta = b.at("theta").get<double>();
  f.bloch.phi = b.at("phi").get<double>();
  f.bloch.unit_vector = vec3_from_json(b.at("vector"), "frame.bloch.vector");
  f.principal_axis = vec3_from_json(j.at("principal_axis"), "frame.principal_axis");
  if (j.contains("gamma") && !j.at("gamma").is_null()) f.gamma = j.at("gamma").get<double>();
  if (j.contains("measurement")) f.measurement = measurement_record_from_json(j.at("measurement"));
  if (j.contains("annotation")) f.annotation = j.at("annotation").get<std::string>();
  return f;
}

}  // namespace spinball
