#pragma once

#include "arena/engine.hpp"
#include "arena/error.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace arena {

struct ApiError {
  int status = 500;
  std::string code;  // invalid_argument, not_found, round_in_progress, debate_finished,
                     // turn_expired, unauthorized, internal
  std::string message;
};

ApiError to_api_error(const Error& error);

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::optional<std::string> authorization;  // raw Authorization header
  std::string body;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

struct ApiOptions {
  bool auth_enabled = false;
};

/// Transport-independent request router over an Engine.
///
///   POST /api/debates                     create
///   POST /api/debates/{id}/arguments      submit an argument
///   GET  /api/debates/{id}                state
///   GET  /api/debates/{id}/result         final result (409 until finished)
///   GET  /api/topics?count=N              topic suggestions
///   GET  /health
class ApiServer {
public:
  ApiServer(std::shared_ptr<Engine> engine, ApiOptions options);

  /// Subject id for the request; throws unauthorized when auth is on and the
  /// bearer token is missing or empty.
  std::string authenticate(const std::optional<std::string>& authorization) const;

  ApiResponse handle(const ApiRequest& request);

private:
  ApiResponse route(const ApiRequest& request);

  std::shared_ptr<Engine> engine_;
  ApiOptions options_;
};

/// HTTP/1.1 listener bound to an ApiServer.
class HttpFrontend {
public:
  explicit HttpFrontend(ApiServer& api);
  ~HttpFrontend();
  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  /// Binds the socket; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void run();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace arena
