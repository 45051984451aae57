#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <set>
#include <thread>
#include <vector>

#include "spinball/session.hpp"

namespace spinball {

// Line-oriented TCP endpoint for the live UI. Each connection owns an
// independent Session whose RNG stream is the connection's ordinal (0, 1, ...).
class SessionServer {
 public:
  explicit SessionServer(SessionConfig config);
  ~SessionServer();

  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  // Binds 127.0.0.1:port (0 picks a free port) and returns the bound port.
  // Throws Error on failure.
  int listen(int port, const char* host = "127.0.0.1");
  // Accept loop; returns after stop().
  void run();
  void stop();

 private:
  void serve_connection(int fd, std::uint64_t stream);

  SessionConfig config_;
  int listen_fd_ = -1;
  std::atomic<bool> stopping_{false};
  std::mutex mutex_;
  std::set<int> clients_;
  std::vector<std::thread> workers_;
};

}  // namespace spinball
