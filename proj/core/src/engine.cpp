#include "arena/engine.hpp"

#include "arena/error.hpp"
#include "arena/prompt.hpp"
#include "arena/resources.hpp"
#include "arena/serialization.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <chrono>

namespace arena {

namespace {

constexpr std::size_t kMaxMarginsPerStrategy = 100;
constexpr std::size_t kMaxTopicChars = 300;

std::size_t utf8_length(std::string_view text)
{
  return static_cast<std::size_t>(std::count_if(text.begin(), text.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0U) != 0x80U;
  }));
}

bool blank(std::string_view text)
{
  return std::all_of(text.begin(), text.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

const FallacyLexicon& lexicon_of(const EngineConfig& config)
{
  return config.lexicon ? *config.lexicon : FallacyLexicon::builtin();
}

}  // namespace

Timestamp system_now_ms()
{
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Engine::Engine(EngineConfig config, std::shared_ptr<Gateway> gateway,
               std::shared_ptr<FileStore> store, Clock clock)
    : config_(std::move(config)),
      gateway_(std::move(gateway)),
      store_(std::move(store)),
      clock_(std::move(clock)),
      id_rng_(derive_seed(config_.seed, 0x1d))
{
  require(gateway_ != nullptr, ErrorCode::InvalidArgument, "engine needs a gateway");
  require(static_cast<bool>(clock_), ErrorCode::InvalidArgument, "engine needs a clock");
  config_.ga.validate();
  config_.search.validate();
  config_.weights.validate();
  require(config_.min_rounds >= 1 && config_.min_rounds <= config_.default_rounds &&
              config_.default_rounds <= config_.max_rounds,
          ErrorCode::InvalidArgument, "round limits must satisfy 1 <= min <= default <= max");
  require(config_.turn_limit_ms > 0, ErrorCode::InvalidArgument, "turn limit must be positive");
}

std::string Engine::next_debate_id()
{
  while (true) {
    std::string id = fmt::format("{:016x}", id_rng_());
    if (debates_.count(id) == 0 && !(store_ && store_->has_debate(id))) return id;
  }
}

std::shared_ptr<Engine::Slot> Engine::find_slot(std::string_view debate_id)
{
  if (const auto it = debates_.find(debate_id); it != debates_.end()) return it->second;
  if (store_ && store_->has_debate(debate_id)) {
    auto slot = std::make_shared<Slot>();
    slot->state = store_->load_debate(debate_id);
    debates_.emplace(std::string(debate_id), slot);
    return slot;
  }
  fail(ErrorCode::NotFound, "unknown debate " + std::string(debate_id));
}

Engine::PopulationSlot& Engine::population_slot(const std::string& key)
{
  std::lock_guard lock(mutex_);
  auto it = populations_.find(key);
  if (it == populations_.end()) {
    auto slot = std::make_unique<PopulationSlot>();
    slot->population =
        store_ && store_->has_population(key)
            ? store_->load_population(key)
            : init_population(config_.ga.population_size, population_seed(config_.seed, key));
    slot->margins.resize(slot->population.members.size());
    it = populations_.emplace(key, std::move(slot)).first;
  }
  return *it->second;
}

Population Engine::population(std::string_view key)
{
  PopulationSlot& slot = population_slot(std::string(key));
  std::lock_guard lock(slot.mutex);
  return slot.population;
}

Engine::StrategyChoice Engine::evolve_and_choose(const std::string& key)
{
  PopulationSlot& slot = population_slot(key);
  std::lock_guard lock(slot.mutex);
  Population& pop = slot.population;

  auto fitness_of = [&] {
    std::vector<double> f(pop.members.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = evaluate_fitness({i, slot.margins[i]});
    }
    return f;
  };

  const bool any_signal = std::any_of(slot.margins.begin(), slot.margins.end(),
                                      [](const auto& m) { return !m.empty(); });
  if (any_signal) {
    const auto fitnesses = fitness_of();
    GaConfig cfg = config_.ga;
    cfg.population_size = pop.members.size();
    cfg.tournament_size = std::min(cfg.tournament_size, cfg.population_size);
    cfg.elite_count = std::min(cfg.elite_count, cfg.population_size - 1);

    Rng rng(derive_seed(pop.seed, pop.generation));
    Population next = evolve_generation(pop, fitnesses, cfg, rng);
    if (store_) store_->save_population(key, next);

    std::vector<std::vector<double>> margins(next.members.size());
    const auto elites = elite_indices(fitnesses, cfg.elite_count);
    for (std::size_t j = 0; j < elites.size(); ++j) {
      margins[j] = std::move(slot.margins[elites[j]]);
    }
    pop = std::move(next);
    slot.margins = std::move(margins);
  }

  const auto fitnesses = fitness_of();
  const std::size_t best = elite_indices(fitnesses, 1).front();
  return {std::string(strategy_hint(pop.members[best])),
          std::make_pair(pop.generation, best)};
}

void Engine::record_margin(const std::string& key,
                           const std::optional<std::pair<std::uint64_t, std::size_t>>& active,
                           double margin)
{
  if (!active) return;
  PopulationSlot& slot = population_slot(key);
  std::lock_guard lock(slot.mutex);
  // Another debate may have evolved the population since the hint was chosen.
  if (slot.population.generation != active->first) return;
  auto& margins = slot.margins[active->second];
  margins.push_back(std::clamp(margin, -10.0, 10.0));
  if (margins.size() > kMaxMarginsPerStrategy) margins.erase(margins.begin());
}

DebateState Engine::create_debate(std::optional<std::string> topic,
                                  std::string_view user_position,
                                  std::optional<std::size_t> rounds, std::string subject)
{
  const Position position = parse_position(user_position);
  const std::size_t rounds_total = rounds.value_or(config_.default_rounds);
  require(rounds_total >= config_.min_rounds && rounds_total <= config_.max_rounds,
          ErrorCode::InvalidArgument,
          fmt::format("rounds must be in [{}, {}]", config_.min_rounds, config_.max_rounds));

  if (topic) {
    require(!blank(*topic), ErrorCode::InvalidArgument, "topic must not be empty");
    require(utf8_length(*topic) <= kMaxTopicChars, ErrorCode::InvalidArgument,
            "topic is too long");
  } else {
    std::uint64_t salt = 0;
    {
      std::lock_guard lock(mutex_);
      salt = derive_seed(config_.seed, topic_counter_++);
    }
    topic = gateway_->generate_topics(1, salt).front();
  }

  DebateState state;
  state.topic = *topic;
  state.user_position = position;
  state.ai_position = complement(position);
  state.rounds_total = rounds_total;
  state.current_round = 1;
  state.phase = Phase::AwaitingUser;
  state.ga_population_key = topic_category(state.topic);
  state.subject = std::move(subject);
  population_slot(state.ga_population_key);

  std::lock_guard lock(mutex_);
  const Timestamp now = clock_();
  state.turn_deadline = now + config_.turn_limit_ms;
  state.debate_id = next_debate_id();

  if (store_) {
    StoredEvent created;
    created.debate_id = state.debate_id;
    created.sequence = 1;
    created.kind = EventKind::Created;
    created.timestamp = now;
    created.payload = {{"topic", state.topic},
                       {"user_position", to_string(state.user_position)},
                       {"ai_position", to_string(state.ai_position)},
                       {"rounds_total", state.rounds_total},
                       {"ga_population_key", state.ga_population_key},
                       {"turn_deadline", state.turn_deadline},
                       {"subject", state.subject}};
    store_->append_event(created);
  }

  auto slot = std::make_shared<Slot>();
  slot->state = state;
  debates_.emplace(state.debate_id, std::move(slot));
  return state;
}

DebateState Engine::get_state(std::string_view debate_id)
{
  std::lock_guard lock(mutex_);
  return find_slot(debate_id)->state;
}

RoundResult Engine::submit_argument(std::string_view debate_id, std::string_view text,
                                    std::optional<std::size_t> expected_round)
{
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lock(mutex_);
    slot = find_slot(debate_id);
    switch (slot->state.phase) {
      case Phase::Processing: fail(ErrorCode::RoundInProgress, "a round is already in progress");
      case Phase::Finished: fail(ErrorCode::DebateFinished, "the debate is finished");
      case Phase::AwaitingUser: break;
    }
    if (expected_round && *expected_round != slot->state.current_round) {
      fail(ErrorCode::RoundInProgress,
           fmt::format("round {} is no longer open", *expected_round));
    }
    require(!blank(text), ErrorCode::InvalidArgument, "argument must not be empty");
    require(utf8_length(text) <= config_.max_argument_chars, ErrorCode::InvalidArgument,
            fmt::format("argument exceeds {} characters", config_.max_argument_chars));
    if (clock_() > slot->state.turn_deadline) {
      fail(ErrorCode::TurnExpired, "the turn deadline has passed");
    }
    slot->state.phase = Phase::Processing;
  }

  try {
    return run_round(*slot, text);
  } catch (...) {
    std::lock_guard lock(mutex_);
    slot->state.phase = Phase::AwaitingUser;
    throw;
  }
}

std::optional<RoundResult> Engine::check_turn_timeout(std::string_view debate_id, Timestamp now)
{
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lock(mutex_);
    slot = find_slot(debate_id);
    if (slot->state.phase != Phase::AwaitingUser || now <= slot->state.turn_deadline) {
      return std::nullopt;
    }
    slot->state.phase = Phase::Processing;
  }

  try {
    return run_round(*slot, std::nullopt);
  } catch (...) {
    std::lock_guard lock(mutex_);
    slot->state.phase = Phase::AwaitingUser;
    throw;
  }
}

RoundResult Engine::run_round(Slot& slot, std::optional<std::string_view> user_text)
{
  DebateState working;
  {
    std::lock_guard lock(mutex_);
    working = slot.state;
  }
  const bool forfeit = !user_text.has_value();
  const std::string& key = working.ga_population_key;
  bool degraded = false;

  // Score the user's argument against the committed state.
  const EvaluationScores user_scores =
      forfeit ? EvaluationScores{}
              : score_argument(*user_text, working, Side::User, config_.weights, *gateway_,
                               &degraded);

  const GameState game = build_game_state(working);
  const StrategyChoice choice = evolve_and_choose(key);

  SearchConfig search = config_.search;
  search.seed = derive_seed(config_.seed, fnv1a64(working.debate_id) ^ working.current_round);
  const Prediction prediction = predict_and_counter(game, search);

  working.transcript.push_back(
      {Side::User, forfeit ? std::string() : std::string(*user_text), user_scores, forfeit});
  working.cumulative_user += user_scores.overall;

  Completion ai = gateway_->generate_opponent_argument(working, choice.hint, prediction.counter);
  degraded = degraded || ai.degraded;
  if (blank(ai.text)) {
    ai.text = "(no response)";
    degraded = true;
  }
  const EvaluationScores ai_scores =
      score_argument(ai.text, working, Side::Ai, config_.weights, *gateway_, &degraded);

  std::string feedback;
  if (forfeit) {
    feedback = "Turn forfeited: no argument arrived before the deadline.\n" +
               render_feedback_template(user_scores, {}, {});
  } else {
    const auto flags = flag_fallacies(*user_text, lexicon_of(config_));
    feedback = build_feedback(user_scores, flags, *user_text, *gateway_, &degraded);
  }

  working.transcript.push_back({Side::Ai, ai.text, ai_scores, false});
  working.cumulative_ai += ai_scores.overall;

  std::vector<std::string> suggestions = gateway_->generate_suggestions(working, &degraded);

  const std::size_t round = working.current_round;
  const bool last = round == working.rounds_total;
  const Timestamp now = clock_();
  working.turn_deadline = now + config_.turn_limit_ms;
  working.last_hint = choice.hint;
  working.last_prediction = prediction.predicted_user;
  if (last) {
    working.phase = Phase::Finished;
  } else {
    working.current_round = round + 1;
    working.phase = Phase::AwaitingUser;
  }

  if (store_) {
    std::uint64_t seq = store_->last_sequence(working.debate_id);
    std::vector<StoredEvent> batch;
    auto add = [&](EventKind kind, nlohmann::json payload) {
      batch.push_back({working.debate_id, ++seq, kind, std::move(payload), now});
    };
    if (forfeit) {
      add(EventKind::Forfeit, {{"round", round}});
    } else {
      add(EventKind::UserArgument, {{"round", round}, {"text", *user_text}});
    }
    add(EventKind::AiArgument, {{"round", round},
                                {"text", ai.text},
                                {"hint", choice.hint},
                                {"predicted_move", prediction.predicted_user}});
    add(EventKind::Scores, {{"round", round}, {"user", user_scores}, {"ai", ai_scores}});
    add(EventKind::RoundAdvanced, {{"round", round},
                                   {"next_round", working.current_round},
                                   {"turn_deadline", working.turn_deadline}});
    if (last) add(EventKind::Finished, nlohmann::json::object());
    store_->append_events(batch);
  }

  record_margin(key, choice.active, ai_scores.overall - user_scores.overall);

  {
    std::lock_guard lock(mutex_);
    slot.state = working;
  }

  RoundResult result;
  result.ai_response = ai.text;
  result.user_scores = user_scores;
  result.ai_scores = ai_scores;
  result.feedback = std::move(feedback);
  result.suggestions = std::move(suggestions);
  result.strategy_hint = choice.hint;
  result.predicted_move = prediction.predicted_user;
  result.round = round;
  result.debate_over = last;
  result.degraded = degraded;
  return result;
}

DebateResult Engine::finalize(std::string_view debate_id)
{
  const DebateState state = get_state(debate_id);
  require(state.phase == Phase::Finished, ErrorCode::InvalidState, "the debate is not finished");
  std::vector<std::pair<double, double>> per_round;
  for (std::size_t i = 0; i + 1 < state.transcript.size(); i += 2) {
    per_round.emplace_back(state.transcript[i].scores.overall,
                           state.transcript[i + 1].scores.overall);
  }
  return aggregate_rounds(std::move(per_round));
}

}  // namespace arena
