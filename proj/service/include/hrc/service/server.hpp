#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "hrc/service/session.hpp"

namespace hrc::service {

struct ServerConfig {
  std::string address = "0.0.0.0";
  unsigned short port = 0;  // 0 picks a free port
  std::shared_ptr<const SessionConfig> session;
  std::uint64_t seed = 0;
};

// WebSocket front end. Every connection opens with hello; a hello carrying a
// known session_id re-attaches to that session. Ticks run on a per-session
// timer at the configured rate, on a single event loop.
class Server {
 public:
  explicit Server(ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  unsigned short port() const;
  // Blocks until stop() is called.
  void run();
  // Safe from any thread.
  void stop();

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
};

}  // namespace hrc::service
