#include "spinball/session.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "spinball/errors.hpp"
#include "spinball/server.hpp"

using namespace spinball;
namespace fs = std::filesystem;

namespace {

const char* kFullTurn = R"({"events":[{"type":"rotate","axis":[0,0,1],"angle":6.283185307179586,"steps":360}]})";
const char* kOctant = R"({"events":[
  {"type":"geodesic","from":[0,0,1],"to":[1,0,0],"steps":90},
  {"type":"geodesic","from":[1,0,0],"to":[0,1,0],"steps":90},
  {"type":"geodesic","from":[0,1,0],"to":[0,0,1],"steps":90}]})";

Json run(const std::string& script, SessionConfig config = {}) {
  std::stringstream trace;
  return run_script(parse_script(script), config, trace);
}

Spinor spinor_of(const Json& j) { return spinor_from_json(j); }

// Scratch directory removed on scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("spinball_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name, const std::string& content = {}) const {
    const fs::path p = path / name;
    if (!content.empty()) std::ofstream(p) << content;
    return p.string();
  }
};

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliResult cli(const std::string& args) {
  TempDir tmp;
  const std::string out = tmp.file("stdout"), err = tmp.file("stderr");
  const std::string cmd = std::string("'") + SPINBALL_CLI + "' " + args + " >'" + out + "' 2>'" + err + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

// Blocking line client for the serve endpoint.
class LineClient {
 public:
  explicit LineClient(int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    ok_ = ::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0;
  }
  ~LineClient() { ::close(fd_); }
  bool ok() const { return ok_; }

  void send(const std::string& line) {
    const std::string data = line + "\n";
    std::size_t sent = 0;
    while (sent < data.size()) {
      const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
      if (n <= 0) return;
      sent += static_cast<std::size_t>(n);
    }
  }

  std::string read_line() {
    for (;;) {
      const auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      char chunk[4096];
      const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n <= 0) return {};
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 private:
  int fd_ = -1;
  bool ok_ = false;
  std::string buffer_;
};

}  // namespace

TEST(RunScript, FullTurnFlipsSignGammaPi) {
  const Json s = run(kFullTurn);
  EXPECT_LT(distance(spinor_of(s["final_spinor"]), Complex{-1.0, 0.0} * Spinor::up()), 1e-9);
  ASSERT_TRUE(s["gamma"].is_number());
  EXPECT_NEAR(s["gamma"].get<double>(), kPi, 1e-12);
  EXPECT_EQ(s["step_count"], 360);
}

TEST(RunScript, EmptyScriptIsInit) {
  const Json s = run("[]");
  EXPECT_EQ(distance(spinor_of(s["final_spinor"]), Spinor::up()), 0.0);
  EXPECT_EQ(s["gamma"].get<double>(), 0.0);
  EXPECT_EQ(s["events"], 0);
  EXPECT_EQ(s["panel"]["pentagon"], Json::array({255, 0, 0}));
  EXPECT_EQ(s["panel"]["hexagon"], Json::array({0, 0, 0}));
}

TEST(RunScript, OctantOverlapPhase) {
  const Json s = run(kOctant);
  EXPECT_NEAR(s["overlap_phase"].get<double>(), -kPi / 4, 1e-6);
  EXPECT_NEAR(s["overlap_magnitude"].get<double>(), 1.0, 1e-12);
  // The orientation is a quarter turn about z, not closed.
  EXPECT_TRUE(s["gamma"].is_null());
}

TEST(RunScript, OneFramePerEvent) {
  std::stringstream trace;
  SessionConfig c;
  c.seed = 5;
  run_script(parse_script(R"([{"type":"annotate","text":"a"},{"type":"measure","axis":[1,0,0]},
                               {"type":"fiber","delta":1.0,"steps":4}])"),
             c, trace);
  const auto frames = parse_trace(trace);
  ASSERT_EQ(frames.size(), 4u);
  EXPECT_EQ(frames[1].annotation, "a");
  ASSERT_TRUE(frames[2].measurement.has_value());
  EXPECT_NEAR(frames[2].measurement->p_up, 0.5, 1e-12);
  EXPECT_EQ(frames[3].step_count - frames[2].step_count, 4);
}

TEST(RunScript, FiberEventIsGlobalPhase) {
  // Starting from up, the principal axis carries the Bloch vector.
  SessionConfig c;
  const Json s = run(R"([{"type":"rotate","axis":[0,1,0],"angle":0.9,"steps":30},{"type":"annotate","text":"x"}])", c);
  const Json f = run(R"([{"type":"rotate","axis":[0,1,0],"angle":0.9,"steps":30},{"type":"fiber","delta":2.0,"steps":20}])",
                     c);
  EXPECT_LT(distance(spinor_of(f["final_spinor"]), std::polar(1.0, -1.0) * spinor_of(s["final_spinor"])), 1e-10);
}

TEST(RunScript, ErrorsNameTheEvent) {
  std::stringstream trace;
  const auto events = parse_script(R"([{"type":"annotate","text":"a"},
    {"type":"field","omega":[0,0,1],"t0":0,"t1":1,"dt":0.01},
    {"type":"geodesic","from":[0,0,1],"to":[1,0,0],"steps":2}])");
  EXPECT_NO_THROW(run_script(events, {}, trace));
  try {
    parse_script(R"([{"type":"annotate","text":"a"},{"type":"field","omega":[0,0,100],"t0":0,"t1":1,"dt":0.1}])");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("event 1"), std::string::npos) << e.what();
  }
}

TEST(ClassifyScript, HomotopyClasses) {
  const auto classify = [](const std::string& text) { return classify_script(parse_script(text), {}); };
  const HomotopyClass two = classify(kFullTurn);
  EXPECT_FALSE(two.is_trivial);
  EXPECT_NEAR(two.gamma, kPi, 1e-12);
  const HomotopyClass four =
      classify(R"([{"type":"rotate","axis":[0.6,0,0.8],"angle":12.566370614359172,"steps":720}])");
  EXPECT_TRUE(four.is_trivial);
  EXPECT_NEAR(four.gamma, 0.0, 1e-12);
  const HomotopyClass back = classify(R"([{"type":"rotate","axis":[1,0,0],"angle":2.5,"steps":180},
                                           {"type":"rotate","axis":[1,0,0],"angle":-2.5,"steps":180}])");
  EXPECT_TRUE(back.is_trivial);
  EXPECT_THROW(classify(kOctant), LoopNotClosed);
  EXPECT_THROW(classify(R"([{"type":"measure","axis":[0,0,1]}])"), ValidationError);
}

TEST(Protocol, HelloAndFrames) {
  SessionConfig c;
  c.seed = 11;
  Session session(c);
  const Json hello = Json::parse(hello_message(session));
  EXPECT_EQ(hello["type"], "hello");
  EXPECT_EQ(hello["frame"]["panel"]["pentagon"], Json::array({255, 0, 0}));
  EXPECT_EQ(hello["frame"]["panel"]["hexagon"], Json::array({0, 0, 0}));
  EXPECT_EQ(hello["config"]["seed"], 11);

  EXPECT_EQ(Json::parse(handle_message(session, R"({"type":"hello"})"))["type"], "hello");

  Json last;
  for (int k = 0; k < 360; ++k) {
    last = Json::parse(handle_message(session, R"({"type":"rotate","axis":[0,0,1],"angle":0.017453292519943295,"steps":1})"));
    ASSERT_EQ(last["type"], "frame");
    EXPECT_EQ(last["index"], k + 1);
  }
  EXPECT_LT(distance(spinor_of(last["spinor"]), Complex{-1.0, 0.0} * Spinor::up()), 1e-9);

  const Json bad = Json::parse(handle_message(session, "{not json"));
  EXPECT_EQ(bad["type"], "error");
  const Json bad2 = Json::parse(handle_message(session, R"({"type":"rotate","axis":[0,0,0],"angle":1})"));
  EXPECT_EQ(bad2["type"], "error");
  // Session survives.
  const Json after = Json::parse(handle_message(session, R"({"type":"annotate","text":"still here"})"));
  EXPECT_EQ(after["type"], "frame");
  EXPECT_EQ(after["annotation"], "still here");
}

TEST(Protocol, SeededMeasurementIsDeterministic) {
  SessionConfig c;
  c.seed = 123;
  c.initial_spinor = Spinor{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  std::vector<int> a, b;
  for (auto* out : {&a, &b}) {
    Session session(c);
    for (int k = 0; k < 20; ++k) {
      handle_message(session, R"({"type":"rotate","axis":[0,1,0],"angle":0.0,"steps":1})");
      const Json f = Json::parse(handle_message(session, R"({"type":"measure","axis":[1,0,0]})"));
      out->push_back(f["measurement"]["outcome"].get<int>());
      handle_message(session, R"({"type":"measure","axis":[0,0,1]})");
    }
  }
  EXPECT_EQ(a, b);
}

TEST(Server, LineProtocolOverTcp) {
  SessionConfig c;
  c.seed = 9;
  SessionServer server(c);
  const int port = server.listen(0);
  ASSERT_GT(port, 0);
  std::thread loop([&] { server.run(); });

  {
    LineClient client(port);
    ASSERT_TRUE(client.ok());
    const Json hello = Json::parse(client.read_line());
    EXPECT_EQ(hello["type"], "hello");
    EXPECT_EQ(hello["frame"]["panel"]["pentagon"], Json::array({255, 0, 0}));

    for (int k = 0; k < 360; ++k) {
      client.send(R"({"type":"rotate","axis":[0,0,1],"angle":0.017453292519943295,"steps":1})");
    }
    Json last;
    for (int k = 0; k < 360; ++k) {
      last = Json::parse(client.read_line());
      ASSERT_EQ(last["type"], "frame");
      ASSERT_EQ(last["index"], k + 1);
    }
    EXPECT_LT(distance(spinor_of(last["spinor"]), Complex{-1.0, 0.0} * Spinor::up()), 1e-9);

    client.send("garbage");
    EXPECT_EQ(Json::parse(client.read_line())["type"], "error");
    client.send(R"({"type":"measure","axis":[0,0,1]})");
    const Json m = Json::parse(client.read_line());
    EXPECT_EQ(m["measurement"]["outcome"], 1);

    // A second connection is an independent session.
    LineClient other(port);
    ASSERT_TRUE(other.ok());
    const Json fresh = Json::parse(other.read_line());
    EXPECT_EQ(fresh["frame"]["index"], 0);
    EXPECT_EQ(fresh["frame"]["step_count"], 0);
  }

  server.stop();
  loop.join();
}

TEST(Cli, RunWritesTraceAndSummary) {
  TempDir tmp;
  const std::string script = tmp.file("turn.json", kFullTurn);
  const std::string trace = tmp.file("trace.jsonl");
  const CliResult r = cli("run '" + script + "' --seed 1 --out '" + trace + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  const Json summary = Json::parse(r.out);
  EXPECT_NEAR(summary["gamma"].get<double>(), kPi, 1e-12);
  std::ifstream in(trace);
  EXPECT_EQ(parse_trace(in).size(), 2u);

  const CliResult to_stdout = cli("run '" + script + "' --seed 1");
  ASSERT_EQ(to_stdout.code, 0);
  EXPECT_EQ(to_stdout.out, slurp(trace));
}

TEST(Cli, DeterministicTraces) {
  TempDir tmp;
  const std::string script = tmp.file("s.json", R"([
    {"type":"rotate","axis":[0,1,0],"angle":1.1},
    {"type":"measure","axis":[1,0,0]},
    {"type":"field","omega":[0.3,0.1,1.0],"t0":0,"t1":2,"dt":0.01},
    {"type":"measure","axis":[0,0,1]},
    {"type":"fiber","delta":0.5}])");
  const CliResult a = cli("run '" + script + "' --seed 42 --initial 0.6,0,0,0.8");
  const CliResult b = cli("run '" + script + "' --seed 42 --initial 0.6,0,0,0.8");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, GeneratedSeedIsPrinted) {
  TempDir tmp;
  const std::string script = tmp.file("s.json", "[]");
  const CliResult r = cli("run '" + script + "'");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("seed: "), std::string::npos);
}

TEST(Cli, BerryAndStats) {
  const CliResult up = cli("berry octant");
  ASSERT_EQ(up.code, 0) << up.err;
  const Json ju = Json::parse(up.out);
  EXPECT_NEAR(ju["overlap_phase"].get<double>(), -kPi / 4, 1e-6);
  EXPECT_NEAR(ju["solid_angle"].get<double>(), kPi / 2, 1e-9);
  EXPECT_EQ(ju["agrees"], true);
  const CliResult down = cli("berry octant --spin down");
  EXPECT_NEAR(Json::parse(down.out)["overlap_phase"].get<double>(), kPi / 4, 1e-6);

  TempDir tmp;
  const std::string tri = tmp.file("tri.json", R"({"vertices":[[0,0,1],[0.8,0,0.6],[0,0.6,0.8]],"samples_per_edge":60})");
  const CliResult t = cli("berry '" + tri + "'");
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(Json::parse(t.out)["agrees"], true);

  const CliResult det = cli("measure-stats --state 1,0,0,0 --trials 1000 --seed 3");
  ASSERT_EQ(det.code, 0);
  EXPECT_EQ(Json::parse(det.out)["p_hat"].get<double>(), 1.0);
  const CliResult bal = cli("measure-stats --state 0.7071067811865476,0,0.7071067811865476,0 --seed 3");
  ASSERT_EQ(bal.code, 0);
  EXPECT_EQ(Json::parse(bal.out)["pass"], true);
}

TEST(Cli, ReplayAndLoopClass) {
  TempDir tmp;
  std::vector<ImuSample> log;
  for (int k = 0; k <= 1000; ++k) log.push_back({k / 1000.0, Vec3(0, 0, kTwoPi)});
  std::stringstream ss;
  write_imu_log(log, ss);
  const std::string imu = tmp.file("turn.jsonl", ss.str());
  const CliResult r = cli("replay '" + imu + "' --seed 1 --out '" + tmp.file("t.jsonl") + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  const Json s = Json::parse(r.out);
  EXPECT_LT(distance(spinor_of(s["final_spinor"]), Complex{-1.0, 0.0} * Spinor::up()), 1e-9);
  EXPECT_NEAR(s["gamma"].get<double>(), kPi, 1e-9);

  const CliResult lc = cli("loop-class '" + tmp.file("turn.json", kFullTurn) + "' --seed 1");
  ASSERT_EQ(lc.code, 0) << lc.err;
  EXPECT_NEAR(Json::parse(lc.out)["gamma"].get<double>(), kPi, 1e-12);
}

TEST(Cli, ExitCodes) {
  TempDir tmp;
  EXPECT_EQ(cli("run '" + tmp.file("missing.json") + "' --seed 1").code, 2);
  EXPECT_EQ(cli("run '" + tmp.file("bad.json", "[{\"type\":\"rotate\"") + "' --seed 1").code, 2);
  EXPECT_EQ(cli("run '" + tmp.file("unsafe.json", R"([{"type":"rotate","axis":[0,0,1],"angle":7,"steps":1}])") +
                "' --seed 1")
                .code,
            2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("run").code, 2);
  EXPECT_EQ(cli("run '" + tmp.file("e.json", "[]") + "' --seed 1 --initial 1,0,1,0").code, 2);
  EXPECT_EQ(cli("measure-stats --axis 0,0,2 --seed 1").code, 2);
  EXPECT_EQ(cli("replay '" + tmp.file("b.jsonl", "{\"t\":1,\"gyro\":[0,0,1]}\n{\"t\":0,\"gyro\":[0,0,1]}\n") +
                "' --seed 1")
                .code,
            2);
  // Valid input that cannot be classified is a runtime failure.
  EXPECT_EQ(cli("loop-class '" + tmp.file("o.json", kOctant) + "' --seed 1").code, 3);
}
