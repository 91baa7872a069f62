#include "hysim/server.hpp"

#include <algorithm>
#include <condition_variable>
#include <mutex>
#include <stdexcept>
#include <stop_token>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "hysim/errors.hpp"
#include "hysim/parser.hpp"
#include "hysim/pipeline.hpp"
#include "hysim/version.hpp"

namespace hysim::server {

using nlohmann::json;

namespace {

ApiResponse error_response(int status, const std::string& message,
                           json diagnostics = json::array()) {
  json body = {{"error", message}, {"diagnostics", std::move(diagnostics)}};
  return {status, body.dump() + "\n"};
}

class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json parse_body(const std::string& body) {
  if (body.empty()) throw BadRequest("request body is empty");
  json req = json::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object()) throw BadRequest("request body must be a JSON object");
  return req;
}

std::string string_field(const json& req, const char* name) {
  const auto it = req.find(name);
  if (it == req.end() || !it->is_string()) {
    throw BadRequest(std::string("field '") + name + "' must be a string");
  }
  return it->get<std::string>();
}

double number_field(const json& req, const char* name, double fallback) {
  const auto it = req.find(name);
  if (it == req.end() || it->is_null()) return fallback;
  if (!it->is_number()) throw BadRequest(std::string("field '") + name + "' must be a number");
  return it->get<double>();
}

SimConfig config_from(const json& req, const SimConfig& defaults) {
  SimConfig cfg = defaults;
  cfg.max_time = number_field(req, "maxTime", defaults.max_time);
  cfg.sample_every = number_field(req, "sampleEvery", defaults.sample_every);
  cfg.ode_step = number_field(req, "odeStep", defaults.ode_step);
  return cfg;
}

/// Runs `work` with a stop token that fires after `timeout`. Returns false
/// when the deadline passed.
template <class Work>
bool with_deadline(std::chrono::milliseconds timeout, Work&& work) {
  std::stop_source deadline;
  std::jthread watchdog([&deadline, timeout](std::stop_token done) {
    std::mutex m;
    std::condition_variable_any cv;
    std::unique_lock lock(m);
    if (!cv.wait_for(lock, done, timeout, [] { return false; }) && !done.stop_requested()) {
      deadline.request_stop();
    }
  });
  work(deadline.get_token());
  watchdog.request_stop();
  watchdog.join();
  return !deadline.stop_requested();
}

template <class Handler>
ApiResponse guarded(Handler&& handler) {
  try {
    return handler();
  } catch (const BadRequest& e) {
    return error_response(400, e.what());
  } catch (const SourceError& e) {
    return error_response(400, e.what(), json::array({diagnostic_to_json(e)}));
  } catch (const ConfigError& e) {
    return error_response(400, e.what());
  } catch (const BatchTooLarge& e) {
    return error_response(422, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

}  // namespace

ApiResponse handle_parse(const std::string& body) {
  return guarded([&] {
    const json req = parse_body(body);
    const std::string source = string_field(req, "source");
    json out = {{"ok", true}, {"diagnostics", json::array()}};
    try {
      parse(source);
    } catch (const SourceError& e) {
      out["ok"] = false;
      out["diagnostics"].push_back(diagnostic_to_json(e));
    }
    return ApiResponse{200, out.dump() + "\n"};
  });
}

ApiResponse handle_simulate(const std::string& body, const ApiOptions& options) {
  return guarded([&] {
    const json req = parse_body(body);
    const std::string source = string_field(req, "source");
    const SimConfig cfg = config_from(req, options.defaults);
    cfg.validate();
    std::string text;
    const bool in_time = with_deadline(options.timeout, [&](std::stop_token stop) {
      const auto runs = simulate_source(source, cfg, {options.parallelism, options.batch_cap, stop});
      text = trace_json_text(cfg, runs);
    });
    if (!in_time) {
      return error_response(422, "simulation exceeded the request timeout; partial results are unavailable");
    }
    return ApiResponse{200, std::move(text)};
  });
}

ApiResponse handle_histogram(const std::string& body, const ApiOptions& options) {
  return guarded([&] {
    const json req = parse_body(body);
    const std::string source = string_field(req, "source");
    const std::string query = string_field(req, "query");
    const SimConfig cfg = config_from(req, options.defaults);
    cfg.validate();
    std::string text;
    const bool in_time = with_deadline(options.timeout, [&](std::stop_token stop) {
      const auto result =
          histogram_for_source(source, query, cfg, {options.parallelism, options.batch_cap, stop});
      text = histogram_json_text(result);
    });
    if (!in_time) {
      return error_response(422, "simulation exceeded the request timeout; partial results are unavailable");
    }
    return ApiResponse{200, std::move(text)};
  });
}

ApiResponse handle_health() {
  return {200, json{{"status", "ok"}, {"version", kVersion}}.dump() + "\n"};
}

struct Server::Impl {
  ServerOptions options;
  httplib::Server http;
  int port = -1;
};

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  auto& http = impl_->http;
  const ApiOptions api = impl_->options.api;
  const std::vector<std::string> origins = impl_->options.cors_origins;

  const auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  const auto not_allowed = [](const httplib::Request&, httplib::Response& res) {
    res.status = 405;
    res.set_content(json{{"error", "method not allowed"}}.dump() + "\n", "application/json");
  };

  http.Post("/api/parse", [reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_parse(req.body));
  });
  http.Post("/api/simulate", [reply, api](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_simulate(req.body, api));
  });
  http.Post("/api/histogram", [reply, api](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_histogram(req.body, api));
  });
  http.Get("/api/health", [reply](const httplib::Request&, httplib::Response& res) {
    reply(res, handle_health());
  });

  for (const char* path : {"/api/parse", "/api/simulate", "/api/histogram"}) {
    http.Get(path, not_allowed);
    http.Put(path, not_allowed);
    http.Delete(path, not_allowed);
    http.Patch(path, not_allowed);
  }
  http.Post("/api/health", not_allowed);
  http.Put("/api/health", not_allowed);
  http.Delete("/api/health", not_allowed);
  http.Patch("/api/health", not_allowed);

  http.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  http.set_post_routing_handler([origins](const httplib::Request& req, httplib::Response& res) {
    const std::string origin = req.get_header_value("Origin");
    if (origins.empty()) {
      res.set_header("Access-Control-Allow-Origin", "*");
    } else if (std::find(origins.begin(), origins.end(), origin) != origins.end()) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    } else {
      return;
    }
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
  // httplib's default sets SO_REUSEPORT, which lets a second server share a
  // busy port instead of failing.
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) {
      res.set_content(json{{"error", "not found"}}.dump() + "\n", "application/json");
    }
  });
}

Server::~Server() { stop(); }

int Server::bind() {
  auto& opts = impl_->options;
  if (opts.port == 0) {
    impl_->port = impl_->http.bind_to_any_port(opts.host);
  } else {
    impl_->port = impl_->http.bind_to_port(opts.host, opts.port) ? opts.port : -1;
  }
  if (impl_->port < 0) {
    throw std::runtime_error("cannot listen on " + opts.host + ":" + std::to_string(opts.port));
  }
  return impl_->port;
}

void Server::serve() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace hysim::server
