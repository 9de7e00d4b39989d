#include "arena/gateway.hpp"

#include "arena/debate_state.hpp"
#include "arena/error.hpp"
#include "arena/resources.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

namespace arena {

namespace {

constexpr std::string_view kNone = "(none)";

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct StubBank {
  std::vector<PromptTemplate> entries;
};

const StubBank& stub_bank(ProviderRole role)
{
  auto load = [](std::string_view file) {
    StubBank bank;
    for (const auto& line : resource_lines(file)) {
      bank.entries.push_back(PromptTemplate::parse(line));
    }
    return bank;
  };
  static const StubBank opponent = load("stub/opponent.txt");
  static const StubBank assistant = load("stub/assistant.txt");
  return role == ProviderRole::Opponent ? opponent : assistant;
}

std::string render_stub(const PromptTemplate& tmpl, const SlotValues& provided)
{
  SlotValues values;
  for (const auto& slot : tmpl.slots()) {
    const auto it = provided.find(slot);
    values[slot] = it == provided.end() ? std::string() : it->second;
  }
  return tmpl.render(values);
}

/// Splits a model reply into trimmed non-empty lines, dropping list markers.
std::vector<std::string> reply_lines(std::string_view text)
{
  static const std::regex marker(R"(^\s*(?:[-*]|\d+[.)])\s*)");
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(trim(text.substr(pos, end - pos)));
    line = std::regex_replace(line, marker, "");
    if (!trim(line).empty()) out.emplace_back(trim(line));
    pos = end + 1;
  }
  return out;
}

std::string or_none(std::string_view text) { return text.empty() ? std::string(kNone) : std::string(text); }

std::string round_slot(const DebateState& d) { return std::to_string(d.current_round); }

std::vector<std::string> stub_suggestions(const DebateState& debate)
{
  GameState state = summarize_debate(debate);
  state.side_to_move = Side::User;
  std::vector<std::pair<Tactic, double>> ranked;
  for (Tactic t : kAllTactics) {
    ranked.emplace_back(t, tactic_strength(state, t));
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  static const std::map<std::string, PromptTemplate, std::less<>> advice = [] {
    std::map<std::string, PromptTemplate, std::less<>> out;
    for (const auto& line : resource_lines("stub/suggestions.tsv")) {
      const auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      out.emplace(line.substr(0, tab), PromptTemplate::parse(line.substr(tab + 1)));
    }
    return out;
  }();

  SlotValues slots{{"topic", debate.topic},
                   {"position", std::string(to_string(debate.user_position))}};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto it = advice.find(to_string(ranked[i].first));
    out.push_back(it == advice.end() ? std::string(to_string(ranked[i].first))
                                     : render_stub(it->second, slots));
  }
  return out;
}

}  // namespace

std::string_view to_string(ProviderRole r)
{
  switch (r) {
    case ProviderRole::Topic: return "topic";
    case ProviderRole::Opponent: return "opponent";
    case ProviderRole::Assistant: return "assistant";
    case ProviderRole::Evaluator: return "evaluator";
  }
  return "topic";
}

ProviderRole parse_role(std::string_view text)
{
  for (ProviderRole r : kAllRoles) {
    if (to_string(r) == text) return r;
  }
  fail(ErrorCode::InvalidArgument, "unknown provider role: " + std::string(text));
}

ProviderConfig ProviderConfig::all_stub()
{
  ProviderConfig config;
  for (ProviderRole r : kAllRoles) config.entries[r] = ProviderEntry{};
  return config;
}

void ProviderConfig::validate() const
{
  for (ProviderRole r : kAllRoles) {
    const auto it = entries.find(r);
    require(it != entries.end(), ErrorCode::InvalidArgument,
            fmt::format("no provider configured for role {}", to_string(r)));
    const ProviderEntry& e = it->second;
    require(e.timeout_ms > 0, ErrorCode::InvalidArgument, "provider timeout must be positive");
    if (e.kind == ProviderKind::Http) {
      require(!e.endpoint.empty() && !e.model.empty(), ErrorCode::InvalidArgument,
              fmt::format("http provider for role {} needs endpoint and model", to_string(r)));
    }
  }
}

std::uint64_t stub_hash(std::string_view prompt) { return fnv1a64(prompt); }

std::array<int, 4> stub_dimensions(std::uint64_t hash)
{
  std::array<int, 4> dims{};
  for (std::size_t k = 0; k < 4; ++k) {
    dims[k] = static_cast<int>(((hash >> (8 * k)) & 0xffU) % 11U);
  }
  return dims;
}

std::optional<std::array<int, 4>> parse_dimensions(std::string_view text)
{
  static const std::array<std::regex, 4> patterns{
      std::regex(R"(relevance\W*(-?\d+))", std::regex::icase),
      std::regex(R"(persuasiveness\W*(-?\d+))", std::regex::icase),
      std::regex(R"(logical[ _-]?consistency\W*(-?\d+))", std::regex::icase),
      std::regex(R"(evidence[ _-]?usage\W*(-?\d+))", std::regex::icase),
  };
  const std::string s(text);
  std::array<int, 4> dims{};
  for (std::size_t i = 0; i < 4; ++i) {
    std::smatch m;
    if (!std::regex_search(s, m, patterns[i])) return std::nullopt;
    try {
      dims[i] = std::clamp(std::stoi(m[1].str()), 0, 10);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return dims;
}

std::string StubProvider::complete(const CompletionRequest& request)
{
  const std::uint64_t h = stub_hash(request.prompt);
  switch (request.role) {
    case ProviderRole::Topic: {
      const auto& bank = topic_bank();
      return bank[h % bank.size()].text;
    }
    case ProviderRole::Evaluator: {
      const auto d = stub_dimensions(h);
      return fmt::format("Relevance: {}\nPersuasiveness: {}\nLogical Consistency: {}\n"
                         "Evidence Usage: {}",
                         d[0], d[1], d[2], d[3]);
    }
    case ProviderRole::Opponent:
    case ProviderRole::Assistant: {
      const auto& bank = stub_bank(request.role).entries;
      return render_stub(bank[h % bank.size()], request.slots);
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown provider role");
}

Gateway::Gateway(const ProviderConfig& config)
{
  config.validate();
  for (const auto& [role, entry] : config.entries) {
    if (entry.kind == ProviderKind::Http) {
      providers_[role] = std::make_shared<HttpProvider>(entry);
    } else {
      providers_[role] = std::make_shared<StubProvider>();
    }
  }
  settings_ = config.entries;
}

Gateway::Gateway(std::map<ProviderRole, std::shared_ptr<Provider>> providers,
                 std::map<ProviderRole, ProviderEntry> settings)
    : providers_(std::move(providers)), settings_(std::move(settings))
{
}

Provider& Gateway::provider_for(ProviderRole role) const
{
  const auto it = providers_.find(role);
  require(it != providers_.end() && it->second != nullptr, ErrorCode::InvalidArgument,
          fmt::format("role {} is not configured", to_string(role)));
  return *it->second;
}

bool Gateway::is_live(ProviderRole role) const { return provider_for(role).live(); }

void Gateway::set_request_log(RequestLog log)
{
  std::lock_guard lock(log_mutex_);
  log_ = std::move(log);
}

CompletionRequest Gateway::make_request(ProviderRole role, std::string prompt,
                                        SlotValues slots) const
{
  CompletionRequest request;
  request.role = role;
  request.prompt = std::move(prompt);
  request.slots = std::move(slots);
  if (const auto it = settings_.find(role); it != settings_.end()) {
    request.max_tokens = it->second.max_tokens;
    request.temperature = it->second.temperature;
    request.timeout_ms = it->second.timeout_ms;
  }
  return request;
}

Completion Gateway::complete(const CompletionRequest& request)
{
  Provider& provider = provider_for(request.role);
  require(!request.prompt.empty(), ErrorCode::InvalidArgument, "prompt must not be empty");
  require(request.timeout_ms > 0, ErrorCode::InvalidArgument, "timeout must be positive");

  Completion completion;
  try {
    completion.text = provider.complete(request);
  } catch (const std::exception&) {
    completion.text = fallback_.complete(request);
    completion.degraded = true;
  }

  std::lock_guard lock(log_mutex_);
  if (log_) log_(request, completion);
  return completion;
}

std::vector<std::string> Gateway::generate_topics(std::size_t count, std::uint64_t salt)
{
  require(count >= 1, ErrorCode::InvalidArgument, "topic count must be >= 1");
  const auto& bank = topic_bank();
  const PromptTemplate& tmpl = builtin_prompt("topic");
  auto prompt_for = [&](std::size_t counter) {
    return tmpl.render({{"salt", std::to_string(salt)}, {"counter", std::to_string(counter)}});
  };

  std::vector<std::string> topics;
  std::set<std::string, std::less<>> seen;

  if (is_live(ProviderRole::Topic)) {
    for (std::size_t attempt = 0; attempt < 4 * count && topics.size() < count; ++attempt) {
      const Completion c =
          complete(make_request(ProviderRole::Topic, prompt_for(attempt), {}));
      const auto lines = reply_lines(c.text);
      if (lines.empty()) continue;
      std::string topic = lines.front();
      if (topic.size() >= 2 && topic.front() == '"' && topic.back() == '"') {
        topic = topic.substr(1, topic.size() - 2);
      }
      if (seen.insert(topic).second) topics.push_back(std::move(topic));
    }
    if (topics.size() == count) return topics;
  } else {
    require(count <= bank.size(), ErrorCode::InvalidArgument,
            fmt::format("stub topic bank holds only {} topics", bank.size()));
  }

  // Hash-indexed bank selection; collisions probe to the next unused entry.
  std::vector<bool> used(bank.size(), false);
  for (std::size_t i = 0; i < bank.size(); ++i) {
    if (seen.count(bank[i].text)) used[i] = true;
  }
  for (std::size_t counter = 0; topics.size() < count; ++counter) {
    if (std::all_of(used.begin(), used.end(), [](bool u) { return u; })) break;
    std::size_t idx = stub_hash(prompt_for(counter)) % bank.size();
    while (used[idx]) idx = (idx + 1) % bank.size();
    used[idx] = true;
    topics.push_back(bank[idx].text);
  }
  return topics;
}

Completion Gateway::generate_opponent_argument(const DebateState& debate, std::string_view hint,
                                               const Move& counter)
{
  require(debate.phase != Phase::Finished, ErrorCode::InvalidState, "debate is finished");
  require(debate.transcript.size() % 2 == 1, ErrorCode::InvalidState,
          "the AI argues only after the user's turn");
  SlotValues slots{
      {"topic", debate.topic},
      {"position", std::string(to_string(debate.ai_position))},
      {"last_argument", or_none(debate.last_argument(Side::User))},
      {"hint", std::string(hint)},
      {"tactic", std::string(to_string(counter.tactic))},
      {"round", round_slot(debate)},
      {"rounds_total", std::to_string(debate.rounds_total)},
  };
  std::string prompt = builtin_prompt("opponent").render(slots);
  return complete(make_request(ProviderRole::Opponent, std::move(prompt), std::move(slots)));
}

std::vector<std::string> Gateway::generate_suggestions(const DebateState& debate, bool* degraded)
{
  require(debate.phase != Phase::Finished, ErrorCode::InvalidState, "debate is finished");
  if (!is_live(ProviderRole::Assistant)) {
    return stub_suggestions(debate);
  }
  SlotValues slots{
      {"topic", debate.topic},
      {"position", std::string(to_string(debate.user_position))},
      {"last_argument", or_none(debate.last_argument(Side::User))},
      {"opponent_argument", or_none(debate.last_argument(Side::Ai))},
  };
  std::string prompt = builtin_prompt("suggestions").render(slots);
  const Completion c =
      complete(make_request(ProviderRole::Assistant, std::move(prompt), std::move(slots)));
  auto lines = reply_lines(c.text);
  if (c.degraded || lines.size() < 3) {
    if (degraded) *degraded = true;
    return stub_suggestions(debate);
  }
  lines.resize(3);
  return lines;
}

std::string Gateway::render_evaluator_prompt(std::string_view argument, const DebateState& context,
                                             Side side)
{
  // For the AI's entry the opposing argument is the user's argument of the
  // same round; for the user it is the AI's previous reply.
  return builtin_prompt("evaluator")
      .render({{"topic", context.topic},
               {"position", std::string(to_string(context.position_of(side)))},
               {"opposing_argument", or_none(context.last_argument(opponent(side)))},
               {"argument", std::string(argument)}});
}

std::array<int, 4> Gateway::raw_evaluate(std::string_view argument, const DebateState& context,
                                         Side side, bool* degraded)
{
  require(!trim(argument).empty(), ErrorCode::InvalidArgument, "argument must not be empty");
  const std::string prompt = render_evaluator_prompt(argument, context, side);
  const bool live = is_live(ProviderRole::Evaluator);
  for (int attempt = 0; attempt < (live ? 2 : 1); ++attempt) {
    const Completion c = complete(make_request(ProviderRole::Evaluator, prompt, {}));
    if (const auto dims = parse_dimensions(c.text)) {
      if (c.degraded && degraded) *degraded = true;
      return *dims;
    }
  }
  if (degraded && live) *degraded = true;
  return stub_dimensions(stub_hash(prompt));
}

Completion Gateway::generate_user_argument(const DebateState& debate)
{
  require(debate.phase != Phase::Finished, ErrorCode::InvalidState, "debate is finished");
  SlotValues slots{
      {"topic", debate.topic},
      {"position", std::string(to_string(debate.user_position))},
      {"last_argument", or_none(debate.last_argument(Side::Ai))},
      {"round", round_slot(debate)},
      {"rounds_total", std::to_string(debate.rounds_total)},
  };
  std::string prompt = builtin_prompt("selfplay_user").render(slots);
  return complete(make_request(ProviderRole::Assistant, std::move(prompt), std::move(slots)));
}

std::vector<std::string> Gateway::propose_sketches(const DebateState& debate, std::size_t count)
{
  require(count >= 1, ErrorCode::InvalidArgument, "sketch count must be >= 1");
  SlotValues slots{
      {"count", std::to_string(count)},
      {"topic", debate.topic},
      {"position", std::string(to_string(debate.ai_position))},
  };
  std::string prompt = builtin_prompt("sketches").render(slots);
  const Completion c =
      complete(make_request(ProviderRole::Opponent, std::move(prompt), std::move(slots)));
  if (c.degraded) return {};
  auto lines = reply_lines(c.text);
  if (lines.size() > count) lines.resize(count);
  return lines;
}

}  // namespace arena
