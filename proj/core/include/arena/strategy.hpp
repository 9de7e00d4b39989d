#pragma once

#include "arena/random.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arena {

/// Rhetorical mix on the probability simplex. Genes are ordered
/// (ethos, pathos, logos) wherever a positional view is needed.
struct Strategy {
  double ethos = 1.0 / 3.0;
  double pathos = 1.0 / 3.0;
  double logos = 1.0 / 3.0;

  std::array<double, 3> genes() const { return {ethos, pathos, logos}; }
  double gene(std::size_t i) const { return genes()[i]; }

  bool operator==(const Strategy&) const = default;
};

/// True when every weight is non-negative and the weights sum to 1 within 1e-9.
bool is_valid(const Strategy& s);

struct Population {
  std::vector<Strategy> members;
  std::uint64_t generation = 0;
  std::uint64_t seed = 0;

  bool operator==(const Population&) const = default;
};

struct FitnessRecord {
  std::size_t strategy_index = 0;
  std::vector<double> round_margins;
};

enum class SelectionMethod { Tournament, Roulette };
enum class CrossoverMethod { SinglePoint, TwoPoint, Uniform };

SelectionMethod parse_selection_method(std::string_view text);
CrossoverMethod parse_crossover_method(std::string_view text);
std::string_view to_string(SelectionMethod m);
std::string_view to_string(CrossoverMethod m);

struct GaConfig {
  std::size_t population_size = 20;
  std::size_t tournament_size = 3;
  SelectionMethod selection_method = SelectionMethod::Tournament;
  CrossoverMethod crossover_method = CrossoverMethod::Uniform;
  double mutation_rate = 0.1;
  double mutation_magnitude = 0.15;
  std::size_t elite_count = 2;

  /// Throws invalid-argument when the configuration breaks its invariants.
  void validate() const;
};

Strategy normalize_strategy(std::array<double, 3> raw);

Population init_population(std::size_t size, std::uint64_t seed);

double evaluate_fitness(const FitnessRecord& record);

/// Winner of one tournament over the given contestants: highest fitness,
/// ties to the lowest population index.
std::size_t tournament_winner(std::span<const std::size_t> contestants,
                              std::span<const double> fitnesses);

std::vector<std::pair<std::size_t, std::size_t>> select_parents(
    const Population& population, std::span<const double> fitnesses,
    const GaConfig& config, Rng& rng);

// Deterministic crossover kernels; cut points and masks are explicit.
Strategy crossover_single_point(const Strategy& a, const Strategy& b, std::size_t cut);
Strategy crossover_two_point(const Strategy& a, const Strategy& b, std::size_t first_cut,
                             std::size_t second_cut);
Strategy crossover_uniform(const Strategy& a, const Strategy& b,
                           std::array<bool, 3> take_from_a);

Strategy crossover(const Strategy& a, const Strategy& b, CrossoverMethod method, Rng& rng);

Strategy mutate(const Strategy& s, double rate, double magnitude, Rng& rng);

/// Indices of the `count` fittest members, best first, ties to lowest index.
std::vector<std::size_t> elite_indices(std::span<const double> fitnesses, std::size_t count);

/// One generation: elites copied verbatim to the front, the remainder bred by
/// selection, crossover and mutation.
Population evolve_generation(const Population& population, std::span<const double> fitnesses,
                             const GaConfig& config, Rng& rng);

/// Hint tokens: emphasize-credibility, emphasize-emotion, emphasize-logic, balanced.
std::string_view strategy_hint(const Strategy& s);

}  // namespace arena
