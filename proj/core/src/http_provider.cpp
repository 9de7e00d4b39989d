#include "arena/error.hpp"
#include "arena/gateway.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <future>
#include <memory>
#include <regex>
#include <thread>

namespace arena {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string& url)
{
  static const std::regex pattern(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  require(std::regex_match(url, m, pattern), ErrorCode::InvalidArgument,
          "malformed provider endpoint: " + url);
  return {m[1].str(), m[2].matched ? m[2].str() : std::string("/")};
}

std::string call_endpoint(const ProviderEntry& entry, const CompletionRequest& request)
{
  const Endpoint ep = split_endpoint(entry.endpoint);
  const auto timeout = std::chrono::milliseconds(request.timeout_ms);

  httplib::Client client(ep.origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (!entry.token_env.empty()) {
    if (const char* token = std::getenv(entry.token_env.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }

  const nlohmann::json body{
      {"model", entry.model},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
      {"max_tokens", request.max_tokens},
      {"temperature", request.temperature},
  };

  const auto response = client.Post(ep.path, headers, body.dump(), "application/json");
  if (!response) {
    fail(ErrorCode::ProviderUnavailable,
         "provider request failed: " + httplib::to_string(response.error()));
  }
  if (response->status < 200 || response->status >= 300) {
    fail(ErrorCode::ProviderUnavailable,
         "provider returned status " + std::to_string(response->status));
  }
  const auto parsed = nlohmann::json::parse(response->body, nullptr, false);
  if (parsed.is_discarded()) {
    fail(ErrorCode::ProviderUnavailable, "provider returned invalid JSON");
  }
  try {
    return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::ProviderUnavailable, "provider response has no choices[0].message.content");
  }
}

}  // namespace

HttpProvider::HttpProvider(ProviderEntry entry) : entry_(std::move(entry))
{
  split_endpoint(entry_.endpoint);
}

std::string HttpProvider::complete(const CompletionRequest& request)
{
  // Connect, write and read timeouts apply separately inside the client, so
  // the call runs on a worker and the caller waits at most timeout + grace.
  constexpr auto kGrace = std::chrono::milliseconds(50);
  auto promise = std::make_shared<std::promise<std::string>>();
  auto future = promise->get_future();
  std::thread([entry = entry_, request, promise] {
    try {
      promise->set_value(call_endpoint(entry, request));
    } catch (...) {
      promise->set_exception(std::current_exception());
    }
  }).detach();

  if (future.wait_for(std::chrono::milliseconds(request.timeout_ms) + kGrace) !=
      std::future_status::ready) {
    fail(ErrorCode::ProviderUnavailable, "provider timed out");
  }
  return future.get();
}

}  // namespace arena
