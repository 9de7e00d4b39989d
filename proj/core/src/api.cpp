#include "arena/api.hpp"

#include "arena/serialization.hpp"

#include <httplib.h>

#include <charconv>
#include <regex>

namespace arena {

namespace {

using nlohmann::json;

constexpr std::size_t kMaxTopicCount = 50;

ApiResponse error_response(const ApiError& e)
{
  return {e.status, json{{"error", {{"code", e.code}, {"message", e.message}}}}};
}

json parse_body(const std::string& body)
{
  json doc = json::parse(body, nullptr, false);
  require(!doc.is_discarded(), ErrorCode::InvalidArgument, "request body is not valid JSON");
  require(doc.is_object(), ErrorCode::InvalidArgument, "request body must be a JSON object");
  return doc;
}

std::optional<std::string> optional_string(const json& body, const char* name)
{
  const auto it = body.find(name);
  if (it == body.end() || it->is_null()) return std::nullopt;
  require(it->is_string(), ErrorCode::InvalidArgument, std::string(name) + " must be a string");
  return it->get<std::string>();
}

std::optional<std::size_t> optional_count(const json& body, const char* name)
{
  const auto it = body.find(name);
  if (it == body.end() || it->is_null()) return std::nullopt;
  require(it->is_number_unsigned(), ErrorCode::InvalidArgument,
          std::string(name) + " must be a non-negative integer");
  return it->get<std::size_t>();
}

std::uint64_t parse_query_number(const std::string& text, const char* name)
{
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  require(ec == std::errc() && ptr == text.data() + text.size() && !text.empty(),
          ErrorCode::InvalidArgument, std::string(name) + " must be a non-negative integer");
  return value;
}

}  // namespace

ApiError to_api_error(const Error& error)
{
  switch (error.code()) {
    case ErrorCode::InvalidArgument: return {400, "invalid_argument", error.what()};
    case ErrorCode::Unauthorized: return {401, "unauthorized", error.what()};
    case ErrorCode::NotFound: return {404, "not_found", error.what()};
    case ErrorCode::RoundInProgress:
    case ErrorCode::InvalidState: return {409, "round_in_progress", error.what()};
    case ErrorCode::DebateFinished: return {409, "debate_finished", error.what()};
    case ErrorCode::TurnExpired: return {409, "turn_expired", error.what()};
    default: return {500, "internal", "internal error"};
  }
}

ApiServer::ApiServer(std::shared_ptr<Engine> engine, ApiOptions options)
    : engine_(std::move(engine)), options_(options)
{
  require(engine_ != nullptr, ErrorCode::InvalidArgument, "api server needs an engine");
}

std::string ApiServer::authenticate(const std::optional<std::string>& authorization) const
{
  if (!options_.auth_enabled) return "anonymous";
  static const std::regex bearer(R"(^\s*Bearer\s+(\S+)\s*$)", std::regex::icase);
  std::smatch m;
  if (authorization && std::regex_match(*authorization, m, bearer)) return m[1].str();
  fail(ErrorCode::Unauthorized, "a bearer token is required");
}

ApiResponse ApiServer::handle(const ApiRequest& request)
{
  try {
    return route(request);
  } catch (const Error& e) {
    return error_response(to_api_error(e));
  } catch (const std::exception&) {
    return error_response({500, "internal", "internal error"});
  }
}

ApiResponse ApiServer::route(const ApiRequest& request)
{
  static const std::regex debate_path(R"(^/api/debates/([A-Za-z0-9_-]{1,128})(/arguments|/result)?/?$)");
  const std::string& path = request.path;
  const std::string& method = request.method;

  if (path == "/health" && method == "GET") return {200, json{{"status", "ok"}}};

  const std::string subject = authenticate(request.authorization);

  if ((path == "/api/debates" || path == "/api/debates/") && method == "POST") {
    const json body = parse_body(request.body);
    const auto position = optional_string(body, "user_position");
    require(position.has_value(), ErrorCode::InvalidArgument, "user_position is required");
    const DebateState state = engine_->create_debate(optional_string(body, "topic"), *position,
                                                     optional_count(body, "rounds"), subject);
    return {201, json{{"debate_id", state.debate_id},
                      {"topic", state.topic},
                      {"user_position", to_string(state.user_position)},
                      {"ai_position", to_string(state.ai_position)},
                      {"rounds_total", state.rounds_total}}};
  }

  if (path == "/api/topics" && method == "GET") {
    std::size_t count = 3;
    std::uint64_t salt = 0;
    if (const auto it = request.query.find("count"); it != request.query.end()) {
      count = parse_query_number(it->second, "count");
    }
    if (const auto it = request.query.find("salt"); it != request.query.end()) {
      salt = parse_query_number(it->second, "salt");
    }
    require(count >= 1 && count <= kMaxTopicCount, ErrorCode::InvalidArgument,
            "count must be in [1, 50]");
    return {200, json{{"topics", engine_->gateway().generate_topics(count, salt)}}};
  }

  std::smatch m;
  if (std::regex_match(path, m, debate_path)) {
    const std::string id = m[1].str();
    const std::string tail = m[2].str();
    if (tail.empty() && method == "GET") {
      engine_->check_turn_timeout(id, engine_->now());
      return {200, json(engine_->get_state(id))};
    }
    if (tail == "/result" && method == "GET") {
      engine_->check_turn_timeout(id, engine_->now());
      return {200, json(engine_->finalize(id))};
    }
    if (tail == "/arguments" && method == "POST") {
      const json body = parse_body(request.body);
      const auto text = optional_string(body, "text");
      require(text.has_value(), ErrorCode::InvalidArgument, "text is required");
      return {200, json(engine_->submit_argument(id, *text, optional_count(body, "round")))};
    }
  }

  fail(ErrorCode::NotFound, "no route for " + method + " " + path);
}

struct HttpFrontend::Impl {
  explicit Impl(ApiServer& a) : api(a) {}
  ApiServer& api;
  httplib::Server server;
};

HttpFrontend::HttpFrontend(ApiServer& api) : impl_(std::make_unique<Impl>(api))
{
  auto& server = impl_->server;
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [key, value] : req.params) request.query.emplace(key, value);
    if (req.has_header("Authorization")) request.authorization = req.get_header_value("Authorization");
    request.body = req.body;
    const ApiResponse response = impl_->api.handle(request);
    res.status = response.status;
    res.set_content(response.body.dump(), "application/json; charset=utf-8");
  };
  server.Get(".*", dispatch);
  server.Post(".*", dispatch);
  server.Put(".*", dispatch);
  server.Delete(".*", dispatch);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Authorization, Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind(const std::string& host, int port)
{
  auto& server = impl_->server;
  if (port == 0) {
    const int bound = server.bind_to_any_port(host);
    require(bound > 0, ErrorCode::IoError, "cannot bind " + host);
    return bound;
  }
  require(server.bind_to_port(host, port), ErrorCode::IoError,
          "cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpFrontend::run() { impl_->server.listen_after_bind(); }

void HttpFrontend::stop()
{
  if (impl_) impl_->server.stop();
}

}  // namespace arena
