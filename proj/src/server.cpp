#include "spinball/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>

#include "spinball/errors.hpp"

namespace spinball {

namespace {

bool send_line(int fd, const std::string& text) {
  std::string out = text;
  out.push_back('\n');
  std::size_t sent = 0;
  while (sent < out.size()) {
    const ssize_t n = ::send(fd, out.data() + sent, out.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

SessionServer::SessionServer(SessionConfig config) : config_(config) {}

SessionServer::~SessionServer() {
  stop();
  for (auto& t : workers_) {
    if (t.joinable()) t.join();
  }
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

int SessionServer::listen(int port, const char* host) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw Error(std::string("socket: ") + std::strerror(errno));
  const int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host, &addr.sin_addr) != 1) throw Error(std::string("bad listen address ") + host);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    throw Error("bind port " + std::to_string(port) + ": " + std::strerror(errno));
  }
  if (::listen(listen_fd_, 16) < 0) throw Error(std::string("listen: ") + std::strerror(errno));
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  return ntohs(addr.sin_port);
}

void SessionServer::run() {
  std::uint64_t next_stream = 0;
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      break;
    }
    std::lock_guard lock(mutex_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    clients_.insert(fd);
    workers_.emplace_back(&SessionServer::serve_connection, this, fd, next_stream++);
  }
}

void SessionServer::stop() {
  std::lock_guard lock(mutex_);
  if (stopping_.exchange(true)) return;
  if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
  for (int fd : clients_) ::shutdown(fd, SHUT_RDWR);
}

void SessionServer::serve_connection(int fd, std::uint64_t stream) {
  Session session(config_, stream);
  std::string buffer;
  char chunk[4096];
  bool open = send_line(fd, hello_message(session));
  while (open) {
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t pos;
    while (open && (pos = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      open = send_line(fd, handle_message(session, line));
    }
  }
  std::lock_guard lock(mutex_);
  clients_.erase(fd);
  ::close(fd);
}

}  // namespace spinball
