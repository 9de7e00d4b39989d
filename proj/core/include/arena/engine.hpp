#pragma once

#include "arena/debate_state.hpp"
#include "arena/gateway.hpp"
#include "arena/predictor.hpp"
#include "arena/rubric.hpp"
#include "arena/store.hpp"
#include "arena/strategy.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace arena {

struct EngineConfig {
  std::size_t default_rounds = 3;
  std::size_t min_rounds = 1;
  std::size_t max_rounds = 7;
  std::int64_t turn_limit_ms = 120'000;
  std::size_t max_argument_chars = 4000;
  GaConfig ga;
  SearchConfig search;
  RubricWeights weights;
  /// Null selects the shipped lexicon.
  std::shared_ptr<const FallacyLexicon> lexicon;
  /// Seeds debate ids, topic salts and fresh populations.
  std::uint64_t seed = 42;
};

using Clock = std::function<Timestamp()>;

Timestamp system_now_ms();

/// Owns debate lifecycles. Operations on one debate are serialized: a caller
/// that arrives while a round is being processed gets round-in-progress.
class Engine {
public:
  Engine(EngineConfig config, std::shared_ptr<Gateway> gateway,
         std::shared_ptr<FileStore> store = nullptr, Clock clock = system_now_ms);

  DebateState create_debate(std::optional<std::string> topic, std::string_view user_position,
                            std::optional<std::size_t> rounds, std::string subject = "anonymous");

  /// `expected_round`, when given, must equal the current round (a stale
  /// client gets round-in-progress).
  RoundResult submit_argument(std::string_view debate_id, std::string_view text,
                              std::optional<std::size_t> expected_round = std::nullopt);

  /// Immutable snapshot; debates not in memory are replayed from the store.
  DebateState get_state(std::string_view debate_id);

  DebateResult finalize(std::string_view debate_id);

  /// Forfeits the user's turn when `now` is strictly past the deadline and
  /// plays the AI turn. Returns nothing when no timeout applies.
  std::optional<RoundResult> check_turn_timeout(std::string_view debate_id, Timestamp now);

  /// Snapshot of the population for a category key.
  Population population(std::string_view key);

  Timestamp now() const { return clock_(); }
  const EngineConfig& config() const { return config_; }
  Gateway& gateway() { return *gateway_; }

private:
  struct Slot {
    DebateState state;
    // Strategy that produced the current hint, tagged with its generation.
    std::optional<std::pair<std::uint64_t, std::size_t>> active_strategy;
  };

  struct PopulationSlot {
    std::mutex mutex;
    Population population;
    std::vector<std::vector<double>> margins;
  };

  struct StrategyChoice {
    std::string hint;
    std::optional<std::pair<std::uint64_t, std::size_t>> active;
  };

  std::shared_ptr<Slot> find_slot(std::string_view debate_id);
  PopulationSlot& population_slot(const std::string& key);
  StrategyChoice evolve_and_choose(const std::string& key);
  void record_margin(const std::string& key,
                     const std::optional<std::pair<std::uint64_t, std::size_t>>& active,
                     double margin);
  std::string next_debate_id();

  /// Runs one round on the slot, which the caller has moved to Processing.
  /// `user_text` is empty for a forfeited turn.
  RoundResult run_round(Slot& slot, std::optional<std::string_view> user_text);

  EngineConfig config_;
  std::shared_ptr<Gateway> gateway_;
  std::shared_ptr<FileStore> store_;
  Clock clock_;

  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>, std::less<>> debates_;
  std::map<std::string, std::unique_ptr<PopulationSlot>, std::less<>> populations_;
  Rng id_rng_;
  std::uint64_t topic_counter_ = 0;
};

}  // namespace arena
