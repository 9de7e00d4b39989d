#pragma once

#include "arena/debate_state.hpp"
#include "arena/strategy.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arena {

enum class EventKind { Created, UserArgument, AiArgument, Scores, RoundAdvanced, Finished, Forfeit };

std::string_view to_string(EventKind k);
EventKind parse_event_kind(std::string_view text);

struct StoredEvent {
  std::string debate_id;
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::Created;
  nlohmann::json payload = nlohmann::json::object();
  Timestamp timestamp = 0;

  bool operator==(const StoredEvent&) const = default;
};

/// Folds an event log into a debate. Events after the last round_advanced
/// (or finished) belong to an incomplete round and are ignored, so every
/// prefix of a valid log folds to a valid state.
DebateState fold_events(const std::vector<StoredEvent>& events);

struct PopulationDefaults {
  std::size_t size = 20;
  std::uint64_t base_seed = 0x5eed;
};

/// Seed used for a key's fresh population.
std::uint64_t population_seed(std::uint64_t base_seed, std::string_view key);

/// Embedded file store:
///   <data_dir>/debates/<id>.jsonl      append-only event log
///   <data_dir>/populations/<key>.json  versioned population snapshot
class FileStore {
public:
  static constexpr int kPopulationFormatVersion = 1;

  explicit FileStore(std::filesystem::path data_dir, PopulationDefaults defaults = {});

  /// Appends one event; its sequence must be last + 1 for that debate.
  std::uint64_t append_event(const StoredEvent& event);

  /// Appends a batch with a single write; sequences must continue the log.
  std::uint64_t append_events(const std::vector<StoredEvent>& events);

  std::vector<StoredEvent> read_events(std::string_view debate_id) const;
  std::uint64_t last_sequence(std::string_view debate_id);
  bool has_debate(std::string_view debate_id) const;
  std::vector<std::string> debate_ids() const;

  DebateState load_debate(std::string_view debate_id) const;

  void save_population(std::string_view key, const Population& population);
  /// Missing files yield a fresh population from the store defaults.
  Population load_population(std::string_view key) const;
  bool has_population(std::string_view key) const;

  const std::filesystem::path& data_dir() const { return data_dir_; }
  const PopulationDefaults& population_defaults() const { return defaults_; }

private:
  std::filesystem::path debate_path(std::string_view debate_id) const;
  std::filesystem::path population_path(std::string_view key) const;

  std::filesystem::path data_dir_;
  PopulationDefaults defaults_;
  mutable std::mutex mutex_;
};

/// Resolves the data directory: explicit value, then DEBATE_ARENA_DATA, then "./arena-data".
std::filesystem::path resolve_data_dir(const std::optional<std::string>& explicit_dir);

}  // namespace arena
