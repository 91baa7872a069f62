#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "hysim/interp.hpp"
#include "hysim/multirun.hpp"

namespace hysim::server {

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

struct ApiOptions {
  SimConfig defaults;  // used for fields missing from a request
  std::size_t parallelism = 0;
  std::size_t batch_cap = kDefaultBatchCap;
  std::chrono::milliseconds timeout{30'000};
};

// Request handlers, independent of the transport. Each takes the raw request
// body and never touches shared mutable state.
ApiResponse handle_parse(const std::string& body);
ApiResponse handle_simulate(const std::string& body, const ApiOptions& options);
ApiResponse handle_histogram(const std::string& body, const ApiOptions& options);
ApiResponse handle_health();

struct ServerOptions {
  std::string host = "0.0.0.0";
  int port = 8080;  // 0 asks the OS for a free port
  /// Origins allowed by CORS; empty allows any origin.
  std::vector<std::string> cors_origins;
  ApiOptions api;
};

class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the listening socket and returns the bound port. Throws
  /// std::runtime_error when the port is unavailable.
  int bind();
  /// Serves until stop() is called. bind() must have succeeded.
  void serve();
  void stop();
  /// Blocks until serve() is accepting connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hysim::server
