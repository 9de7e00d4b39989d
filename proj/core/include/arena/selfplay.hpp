#pragma once

#include "arena/debate_state.hpp"
#include "arena/engine.hpp"
#include "arena/gateway.hpp"
#include "arena/strategy.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace arena {

struct MetricsRow {
  std::size_t debate_index = 0;
  std::string topic;
  double avg_user = 0.0;
  double avg_ai = 0.0;
  Winner winner = Winner::Draw;
  std::size_t rounds = 0;
  std::uint64_t seed = 0;

  bool operator==(const MetricsRow&) const = default;
};

inline constexpr std::string_view kMetricsHeader =
    "debate_index,topic,avg_user,avg_ai,winner,rounds,seed";

/// Self-play: the assistant role argues the user side, the engine argues
/// the AI side. One row per debate, in index order.
std::vector<MetricsRow> run_selfplay(std::size_t debates, std::uint64_t seed, std::size_t rounds,
                                     const ProviderConfig& providers, EngineConfig base = {});

/// Mean-of-means over the rows, formatted like format_score_summary.
std::string selfplay_summary(const std::vector<MetricsRow>& rows);

std::string metrics_csv(const std::vector<MetricsRow>& rows);

/// Writes metrics_csv(rows); unwritable paths are io-error.
void export_metrics(const std::vector<MetricsRow>& rows, const std::filesystem::path& path);

enum class FitnessProfile { Margin, PathosFavoring, LogosFavoring };

std::string_view to_string(FitnessProfile p);
FitnessProfile parse_fitness_profile(std::string_view text);

/// Synthetic fitness in [0, 1] for a strategy under a profile.
double profile_fitness(FitnessProfile profile, const Strategy& s);

struct GenerationSummary {
  std::uint64_t generation = 0;
  double mean_ethos = 0.0;
  double mean_pathos = 0.0;
  double mean_logos = 0.0;
  double best_fitness = 0.0;

  bool operator==(const GenerationSummary&) const = default;
};

GenerationSummary summarize(const Population& population, FitnessProfile profile);

/// Summaries for generations 0..generations inclusive.
std::vector<GenerationSummary> run_evolution_experiment(std::size_t generations,
                                                        std::size_t population_size,
                                                        FitnessProfile profile,
                                                        std::uint64_t seed, GaConfig base = {});

std::string evolution_csv(const std::vector<GenerationSummary>& rows);

void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace arena
