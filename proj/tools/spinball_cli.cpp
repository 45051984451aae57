// spinball: command-line front end.
//
//   spinball run SCRIPT [--seed N] [--initial a_re,a_im,b_re,b_im] [--out PATH]
//   spinball replay IMU_LOG [--imu-mode body|world] [--out PATH]
//   spinball berry LOOP|octant [--spin up|down]
//   spinball measure-stats [--state ...] [--axis x,y,z] [--trials N] [--seed N]
//   spinball loop-class SCRIPT
//   spinball serve [--port P] [--seed N]
//
// Exit codes: 0 success, 2 validation error, 3 runtime error.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spinball/errors.hpp"
#include "spinball/server.hpp"
#include "spinball/session.hpp"

namespace {

using namespace spinball;

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

std::vector<double> parse_numbers(const std::string& text, std::size_t count, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != count) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(count) + " comma-separated numbers");
  }
  return out;
}

Spinor parse_spinor(const std::string& text, const char* what) {
  const auto v = parse_numbers(text, 4, what);
  const Spinor s{{v[0], v[1]}, {v[2], v[3]}};
  if (!s.is_normalized()) throw ValidationError(std::string(what) + ": spinor must be normalized");
  return s;
}

Vec3 parse_axis(const std::string& text) {
  const auto v = parse_numbers(text, 3, "--axis");
  const Vec3 a{v[0], v[1], v[2]};
  if (std::abs(a.norm() - 1.0) > 1e-6) throw ValidationError("--axis: must be a unit vector");
  return a.normalized();
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CommonOptions {
  std::optional<std::uint64_t> seed;
  std::string initial = "1,0,0,0";
  std::string imu_mode = "body";
  std::string out;
  double steps_per_degree = 1.0;
};

SessionConfig make_config(const CommonOptions& o) {
  SessionConfig c;
  if (o.seed) {
    c.seed = *o.seed;
  } else {
    std::random_device rd;
    c.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "seed: " << c.seed << '\n';
  }
  c.initial_spinor = parse_spinor(o.initial, "--initial");
  c.imu_mode = o.imu_mode == "world" ? Frame::World : Frame::Body;
  if (!(o.steps_per_degree > 0.0)) throw ValidationError("--steps-per-degree must be positive");
  c.steps_per_degree = o.steps_per_degree;
  return c;
}

// Trace to --out (summary on stdout) or trace to stdout (summary on stderr).
template <class Fn>
int with_trace(const CommonOptions& o, Fn&& produce) {
  if (o.out.empty()) {
    const Json summary = produce(std::cout);
    std::cout.flush();
    std::cerr << summary.dump(2) << '\n';
  } else {
    std::ofstream trace(o.out, std::ios::binary);
    if (!trace) throw Error("cannot write " + o.out);
    const Json summary = produce(trace);
    std::cout << summary.dump(2) << '\n';
  }
  return 0;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool imu) {
  cmd->add_option("--seed", o.seed, "RNG seed (generated and printed when absent)");
  cmd->add_option("--initial", o.initial, "initial spinor a_re,a_im,b_re,b_im")->capture_default_str();
  cmd->add_option("--out", o.out, "trace output path (default stdout)");
  cmd->add_option("--steps-per-degree", o.steps_per_degree, "sub-steps per degree when an event omits steps")
      ->capture_default_str();
  if (imu) {
    cmd->add_option("--imu-mode", o.imu_mode, "gyroscope frame")
        ->check(CLI::IsMember({"body", "world"}))
        ->capture_default_str();
  }
}

SessionServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spinorial ball: SU(2) lift of rigid rotations, rendered as a qubit"};
  app.require_subcommand(1);

  CommonOptions common;

  auto* run = app.add_subcommand("run", "execute a manipulation script, write trace and summary");
  std::string script_path;
  run->add_option("script", script_path, "script JSON (- for stdin)")->required();
  add_common(run, common, false);

  auto* replay = app.add_subcommand("replay", "integrate a gyroscope log, write trace and summary");
  std::string imu_path;
  replay->add_option("log", imu_path, "IMU JSON-lines log (- for stdin)")->required();
  add_common(replay, common, true);

  auto* berry = app.add_subcommand("berry", "Berry phase of a geodesic loop against the solid-angle oracle");
  std::string loop_path;
  std::string spin = "up";
  berry->add_option("loop", loop_path, "loop JSON path, - for stdin, or 'octant'")->required();
  berry->add_option("--spin", spin, "initial spin along the loop start")
      ->check(CLI::IsMember({"up", "down"}))
      ->capture_default_str();

  auto* stats = app.add_subcommand("measure-stats", "Monte Carlo projective measurement statistics");
  std::string state_text = "1,0,0,0";
  std::string axis_text = "0,0,1";
  long trials = 100000;
  stats->add_option("--state", state_text, "spinor a_re,a_im,b_re,b_im")->capture_default_str();
  stats->add_option("--axis", axis_text, "measurement axis x,y,z")->capture_default_str();
  stats->add_option("--trials", trials, "number of trials")->capture_default_str()->check(CLI::PositiveNumber);
  stats->add_option("--seed", common.seed, "RNG seed (generated and printed when absent)");

  auto* loop_class = app.add_subcommand("loop-class", "homotopy class of a closed rotation script");
  std::string loop_script;
  loop_class->add_option("script", loop_script, "script JSON (- for stdin)")->required();
  add_common(loop_class, common, false);

  auto* serve = app.add_subcommand("serve", "live session endpoint (JSON lines over TCP)");
  int port = 8765;
  serve->add_option("--port", port, "TCP port (0 picks a free one)")->capture_default_str();
  add_common(serve, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*run) {
      const SessionConfig config = make_config(common);
      const auto events = parse_script(read_file(script_path), ScriptOptions{config.steps_per_degree});
      return with_trace(common, [&](std::ostream& trace) { return run_script(events, config, trace); });
    }
    if (*replay) {
      const SessionConfig config = make_config(common);
      std::vector<ImuSample> samples;
      if (imu_path == "-") {
        samples = parse_imu_log(std::cin);
      } else {
        std::ifstream in(imu_path);
        if (!in) throw ValidationError("cannot open " + imu_path);
        samples = parse_imu_log(in);
      }
      return with_trace(common, [&](std::ostream& trace) { return replay_imu(samples, config, trace); });
    }
    if (*berry) {
      GeodesicLoop loop;
      if (loop_path == "octant") {
        loop = octant_loop();
      } else {
        const std::string text = read_file(loop_path);
        Json doc;
        try {
          doc = Json::parse(text);
        } catch (const Json::parse_error& e) {
          throw ValidationError("loop: JSON syntax error at byte " + std::to_string(e.byte));
        }
        loop = geodesic_loop_from_json(doc);
      }
      const PhaseReport report = berry_experiment(loop, spin == "down" ? Spin::Down : Spin::Up);
      std::cout << to_json(report).dump(2) << '\n';
      return 0;
    }
    if (*stats) {
      const Spinor state = parse_spinor(state_text, "--state");
      const Vec3 axis = parse_axis(axis_text);
      const SessionConfig config = make_config(common);
      Json j = to_json(statistics(state, axis, trials, config.seed));
      j["seed"] = config.seed;
      std::cout << j.dump(2) << '\n';
      return 0;
    }
    if (*loop_class) {
      const SessionConfig config = make_config(common);
      const auto events = parse_script(read_file(loop_script), ScriptOptions{config.steps_per_degree});
      std::cout << to_json(classify_script(events, config)).dump(2) << '\n';
      return 0;
    }
    if (*serve) {
      const SessionConfig config = make_config(common);
      auto server = std::make_unique<SessionServer>(config);
      const int bound = server->listen(port);
      std::cerr << "listening on 127.0.0.1:" << bound << '\n';
      g_server = server.get();
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      server->run();
      g_server = nullptr;
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
