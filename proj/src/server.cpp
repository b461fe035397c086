#include "blochgen/server.hpp"

#include <httplib.h>

#include "blochgen/service.hpp"

namespace blochgen {

struct Server::Impl {
  httplib::Server http;
  int port = -1;
};

Server::Server() : impl_(std::make_unique<Impl>()) {
  impl_->http.Post("/api", [](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::parse_error& e) {
      res.status = 400;
      res.set_content(nlohmann::json({{"ok", false}, {"error", {{"kind", "request"}, {"messages", {e.what()}}}}}).dump(),
                      "application/json");
      return;
    }
    res.set_content(handle_request(body).dump(), "application/json");
  });
  impl_->http.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"ok":true})", "application/json");
  });
}

Server::~Server() { stop(); }

bool Server::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->http.bind_to_any_port(host);
  } else {
    impl_->port = impl_->http.bind_to_port(host, port) ? port : -1;
  }
  return impl_->port > 0;
}

int Server::port() const { return impl_->port; }

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

}  // namespace blochgen
