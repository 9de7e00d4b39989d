#pragma once

#include "arena/predictor.hpp"
#include "arena/prompt.hpp"
#include "arena/side.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arena {

struct DebateState;

enum class ProviderRole { Topic, Opponent, Assistant, Evaluator };

inline constexpr std::array<ProviderRole, 4> kAllRoles{
    ProviderRole::Topic, ProviderRole::Opponent, ProviderRole::Assistant, ProviderRole::Evaluator};

std::string_view to_string(ProviderRole r);
ProviderRole parse_role(std::string_view text);

enum class ProviderKind { Http, Stub };

struct ProviderEntry {
  ProviderKind kind = ProviderKind::Stub;
  std::string endpoint;   // http only, e.g. http://localhost:11434/v1/chat/completions
  std::string model;      // http only
  std::string token_env;  // name of the environment variable holding the bearer token
  std::int64_t timeout_ms = 30000;
  std::size_t max_tokens = 512;
  double temperature = 0.7;
};

struct ProviderConfig {
  std::map<ProviderRole, ProviderEntry> entries;

  static ProviderConfig all_stub();
  /// Every role must map to an entry; http entries need an endpoint and model.
  void validate() const;
};

struct CompletionRequest {
  ProviderRole role = ProviderRole::Opponent;
  std::string prompt;
  SlotValues slots;  // values the prompt was rendered from; the stub reuses them
  std::size_t max_tokens = 512;
  double temperature = 0.7;
  std::int64_t timeout_ms = 30000;
};

struct Completion {
  std::string text;
  bool degraded = false;

  bool operator==(const Completion&) const = default;
};

/// A text-generation backend. Implementations throw Error(ProviderUnavailable)
/// on transport failure or an unusable response.
class Provider {
public:
  virtual ~Provider() = default;
  virtual std::string complete(const CompletionRequest& request) = 0;
  /// True for providers that call a real model.
  virtual bool live() const = 0;
};

std::uint64_t stub_hash(std::string_view prompt);

/// Deterministic provider: picks an entry from the role's template bank by
/// stub_hash(prompt) and fills it from the request slots.
class StubProvider final : public Provider {
public:
  std::string complete(const CompletionRequest& request) override;
  bool live() const override { return false; }
};

/// Chat-completions client: POSTs {model, messages, max_tokens, temperature}
/// and returns choices[0].message.content.
class HttpProvider final : public Provider {
public:
  explicit HttpProvider(ProviderEntry entry);
  std::string complete(const CompletionRequest& request) override;
  bool live() const override { return true; }

  const ProviderEntry& entry() const { return entry_; }

private:
  ProviderEntry entry_;
};

/// Builds the four-dimension quadruple the stub evaluator derives from a hash:
/// byte k of the hash, mod 11, for k = 0..3.
std::array<int, 4> stub_dimensions(std::uint64_t hash);

/// Parses "relevance: 7"-style labelled integers; nullopt unless all four parse.
std::optional<std::array<int, 4>> parse_dimensions(std::string_view text);

class Gateway {
public:
  using RequestLog = std::function<void(const CompletionRequest&, const Completion&)>;

  explicit Gateway(const ProviderConfig& config);
  /// Custom providers per role; roles missing from the map fail with invalid-argument.
  explicit Gateway(std::map<ProviderRole, std::shared_ptr<Provider>> providers,
                   std::map<ProviderRole, ProviderEntry> settings = {});

  /// Routes to the role's provider; on provider failure falls back to the stub
  /// and marks the completion degraded.
  Completion complete(const CompletionRequest& request);

  /// Request with the role's configured limits filled in.
  CompletionRequest make_request(ProviderRole role, std::string prompt, SlotValues slots) const;

  bool is_live(ProviderRole role) const;

  void set_request_log(RequestLog log);

  std::vector<std::string> generate_topics(std::size_t count, std::uint64_t salt = 0);

  Completion generate_opponent_argument(const DebateState& debate, std::string_view hint,
                                        const Move& counter);

  /// Exactly three suggestions for the user's next argument.
  std::vector<std::string> generate_suggestions(const DebateState& debate,
                                                bool* degraded = nullptr);

  std::array<int, 4> raw_evaluate(std::string_view argument, const DebateState& context,
                                  Side side, bool* degraded = nullptr);

  /// Argument for the user side when the engine plays itself (assistant role).
  Completion generate_user_argument(const DebateState& debate);

  /// Argument sketches from the opponent role, one per line (live mode only).
  std::vector<std::string> propose_sketches(const DebateState& debate, std::size_t count);

  static std::string render_evaluator_prompt(std::string_view argument,
                                             const DebateState& context, Side side);

private:
  Provider& provider_for(ProviderRole role) const;

  std::map<ProviderRole, std::shared_ptr<Provider>> providers_;
  std::map<ProviderRole, ProviderEntry> settings_;
  StubProvider fallback_;
  RequestLog log_;
  std::mutex log_mutex_;
};

}  // namespace arena
