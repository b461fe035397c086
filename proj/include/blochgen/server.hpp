#pragma once

#include <functional>
#include <memory>
#include <string>

namespace blochgen {

/// HTTP front of handle_request: POST /api with a JSON body, GET /health.
class Server {
 public:
  Server();
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds to host:port (port 0 picks a free port). Returns false if busy.
  bool bind(const std::string& host, int port);
  int port() const;
  /// Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace blochgen
