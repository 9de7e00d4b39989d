#include "arena/strategy.hpp"

#include "arena/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace arena {

namespace {

constexpr double kSimplexTolerance = 1e-9;
constexpr double kBalancedSpread = 0.1;

void check_fitnesses(const Population& population, std::span<const double> fitnesses)
{
  require(fitnesses.size() == population.members.size(), ErrorCode::InvalidArgument,
          "fitness list length does not match population size");
  for (double f : fitnesses) {
    require(std::isfinite(f), ErrorCode::InvalidArgument, "fitness must be finite");
  }
}

std::size_t roulette_pick(std::span<const double> fitnesses, double total, Rng& rng)
{
  if (total <= 0.0) {
    return uniform_index(rng, fitnesses.size());
  }
  const double target = uniform_unit(rng) * total;
  double running = 0.0;
  for (std::size_t i = 0; i < fitnesses.size(); ++i) {
    running += fitnesses[i];
    if (target < running) {
      return i;
    }
  }
  // Rounding can leave target == total; fall back to the last positive slot.
  for (std::size_t i = fitnesses.size(); i-- > 0;) {
    if (fitnesses[i] > 0.0) {
      return i;
    }
  }
  return fitnesses.size() - 1;
}

}  // namespace

bool is_valid(const Strategy& s)
{
  const auto g = s.genes();
  for (double w : g) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      return false;
    }
  }
  return std::abs(g[0] + g[1] + g[2] - 1.0) <= kSimplexTolerance;
}

SelectionMethod parse_selection_method(std::string_view text)
{
  if (text == "tournament") return SelectionMethod::Tournament;
  if (text == "roulette") return SelectionMethod::Roulette;
  fail(ErrorCode::InvalidArgument, "unknown selection method: " + std::string(text));
}

CrossoverMethod parse_crossover_method(std::string_view text)
{
  if (text == "single_point") return CrossoverMethod::SinglePoint;
  if (text == "two_point") return CrossoverMethod::TwoPoint;
  if (text == "uniform") return CrossoverMethod::Uniform;
  fail(ErrorCode::InvalidArgument, "unknown crossover method: " + std::string(text));
}

std::string_view to_string(SelectionMethod m)
{
  return m == SelectionMethod::Tournament ? "tournament" : "roulette";
}

std::string_view to_string(CrossoverMethod m)
{
  switch (m) {
    case CrossoverMethod::SinglePoint: return "single_point";
    case CrossoverMethod::TwoPoint: return "two_point";
    case CrossoverMethod::Uniform: return "uniform";
  }
  return "uniform";
}

void GaConfig::validate() const
{
  require(population_size >= 1, ErrorCode::InvalidArgument, "population_size must be >= 1");
  require(tournament_size >= 1 && tournament_size <= population_size,
          ErrorCode::InvalidArgument, "tournament_size must be in [1, population_size]");
  require(elite_count < population_size, ErrorCode::InvalidArgument,
          "elite_count must be smaller than population_size");
  require(mutation_rate >= 0.0 && mutation_rate <= 1.0, ErrorCode::InvalidArgument,
          "mutation_rate must be in [0, 1]");
  require(mutation_magnitude >= 0.0 && mutation_magnitude <= 1.0, ErrorCode::InvalidArgument,
          "mutation_magnitude must be in [0, 1]");
}

Strategy normalize_strategy(std::array<double, 3> raw)
{
  for (double w : raw) {
    require(std::isfinite(w) && w >= 0.0, ErrorCode::InvalidArgument,
            "strategy weights must be finite and non-negative");
  }
  const double sum = raw[0] + raw[1] + raw[2];
  if (sum == 0.0) {
    return Strategy{};
  }
  return Strategy{raw[0] / sum, raw[1] / sum, raw[2] / sum};
}

Population init_population(std::size_t size, std::uint64_t seed)
{
  require(size >= 1, ErrorCode::InvalidArgument, "population size must be >= 1");
  Rng rng(seed);
  Population population;
  population.seed = seed;
  population.members.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double e = uniform_open_closed(rng);
    const double p = uniform_open_closed(rng);
    const double l = uniform_open_closed(rng);
    population.members.push_back(normalize_strategy({e, p, l}));
  }
  return population;
}

double evaluate_fitness(const FitnessRecord& record)
{
  if (record.round_margins.empty()) {
    return 0.5;
  }
  double total = 0.0;
  for (double margin : record.round_margins) {
    require(std::isfinite(margin) && margin >= -10.0 && margin <= 10.0,
            ErrorCode::InvalidArgument, "round margin outside [-10, 10]");
    total += std::clamp((margin + 5.0) / 10.0, 0.0, 1.0);
  }
  return total / static_cast<double>(record.round_margins.size());
}

std::size_t tournament_winner(std::span<const std::size_t> contestants,
                              std::span<const double> fitnesses)
{
  require(!contestants.empty(), ErrorCode::InvalidArgument, "tournament needs contestants");
  std::size_t best = contestants.front();
  for (std::size_t idx : contestants) {
    require(idx < fitnesses.size(), ErrorCode::InvalidArgument, "contestant out of range");
    if (fitnesses[idx] > fitnesses[best] || (fitnesses[idx] == fitnesses[best] && idx < best)) {
      best = idx;
    }
  }
  return best;
}

std::vector<std::pair<std::size_t, std::size_t>> select_parents(
    const Population& population, std::span<const double> fitnesses,
    const GaConfig& config, Rng& rng)
{
  config.validate();
  require(config.population_size == population.members.size(), ErrorCode::InvalidArgument,
          "config population_size does not match population");
  check_fitnesses(population, fitnesses);

  const std::size_t n = population.members.size();
  const std::size_t pairs = n - config.elite_count;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(pairs);

  if (config.selection_method == SelectionMethod::Tournament) {
    std::vector<std::size_t> contestants(config.tournament_size);
    auto pick = [&] {
      for (auto& c : contestants) {
        c = uniform_index(rng, n);
      }
      return tournament_winner(contestants, fitnesses);
    };
    for (std::size_t i = 0; i < pairs; ++i) {
      const std::size_t a = pick();
      const std::size_t b = pick();
      out.emplace_back(a, b);
    }
  } else {
    for (double f : fitnesses) {
      require(f >= 0.0, ErrorCode::InvalidArgument, "roulette selection needs fitness >= 0");
    }
    const double total = std::accumulate(fitnesses.begin(), fitnesses.end(), 0.0);
    for (std::size_t i = 0; i < pairs; ++i) {
      const std::size_t a = roulette_pick(fitnesses, total, rng);
      const std::size_t b = roulette_pick(fitnesses, total, rng);
      out.emplace_back(a, b);
    }
  }
  return out;
}

Strategy crossover_single_point(const Strategy& a, const Strategy& b, std::size_t cut)
{
  require(cut >= 1 && cut <= 2, ErrorCode::InvalidArgument, "single-point cut must be 1 or 2");
  const auto ga = a.genes();
  const auto gb = b.genes();
  std::array<double, 3> raw{};
  for (std::size_t i = 0; i < 3; ++i) {
    raw[i] = i < cut ? ga[i] : gb[i];
  }
  return normalize_strategy(raw);
}

Strategy crossover_two_point(const Strategy& a, const Strategy& b, std::size_t first_cut,
                             std::size_t second_cut)
{
  require(first_cut < second_cut && second_cut <= 3, ErrorCode::InvalidArgument,
          "two-point cuts must satisfy c1 < c2 <= 3");
  const auto ga = a.genes();
  const auto gb = b.genes();
  std::array<double, 3> raw{};
  for (std::size_t i = 0; i < 3; ++i) {
    raw[i] = (i >= first_cut && i < second_cut) ? gb[i] : ga[i];
  }
  return normalize_strategy(raw);
}

Strategy crossover_uniform(const Strategy& a, const Strategy& b, std::array<bool, 3> take_from_a)
{
  const auto ga = a.genes();
  const auto gb = b.genes();
  std::array<double, 3> raw{};
  for (std::size_t i = 0; i < 3; ++i) {
    raw[i] = take_from_a[i] ? ga[i] : gb[i];
  }
  return normalize_strategy(raw);
}

Strategy crossover(const Strategy& a, const Strategy& b, CrossoverMethod method, Rng& rng)
{
  require(is_valid(a) && is_valid(b), ErrorCode::InvalidArgument,
          "crossover parents must be valid strategies");
  switch (method) {
    case CrossoverMethod::SinglePoint:
      return crossover_single_point(a, b, 1 + uniform_index(rng, 2));
    case CrossoverMethod::TwoPoint: {
      // Ordered pairs (c1, c2) with 0 <= c1 < c2 <= 3 excluding the
      // degenerate full swap (0, 3).
      static constexpr std::array<std::pair<std::size_t, std::size_t>, 5> kCuts{
          {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}};
      const auto [c1, c2] = kCuts[uniform_index(rng, kCuts.size())];
      return crossover_two_point(a, b, c1, c2);
    }
    case CrossoverMethod::Uniform: {
      std::array<bool, 3> mask{};
      for (auto& bit : mask) {
        bit = coin_flip(rng);
      }
      return crossover_uniform(a, b, mask);
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown crossover method");
}

Strategy mutate(const Strategy& s, double rate, double magnitude, Rng& rng)
{
  require(rate >= 0.0 && rate <= 1.0, ErrorCode::InvalidArgument, "mutation rate must be in [0, 1]");
  require(magnitude >= 0.0 && magnitude <= 1.0, ErrorCode::InvalidArgument,
          "mutation magnitude must be in [0, 1]");
  if (rate == 0.0) {
    return s;
  }
  auto genes = s.genes();
  for (auto& g : genes) {
    if (uniform_unit(rng) < rate) {
      const double delta = (2.0 * uniform_unit(rng) - 1.0) * magnitude;
      g = std::max(0.0, g + delta);
    }
  }
  return normalize_strategy(genes);
}

std::vector<std::size_t> elite_indices(std::span<const double> fitnesses, std::size_t count)
{
  std::vector<std::size_t> order(fitnesses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return fitnesses[l] > fitnesses[r]; });
  order.resize(std::min(count, order.size()));
  return order;
}

Population evolve_generation(const Population& population, std::span<const double> fitnesses,
                             const GaConfig& config, Rng& rng)
{
  const auto parents = select_parents(population, fitnesses, config, rng);

  Population next;
  next.seed = population.seed;
  next.generation = population.generation + 1;
  next.members.reserve(population.members.size());
  for (std::size_t idx : elite_indices(fitnesses, config.elite_count)) {
    next.members.push_back(population.members[idx]);
  }
  for (const auto& [a, b] : parents) {
    const Strategy child = crossover(population.members[a], population.members[b],
                                     config.crossover_method, rng);
    next.members.push_back(mutate(child, config.mutation_rate, config.mutation_magnitude, rng));
  }
  return next;
}

std::string_view strategy_hint(const Strategy& s)
{
  const auto g = s.genes();
  const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
  if (*hi - *lo < kBalancedSpread) {
    return "balanced";
  }
  // max_element returns the first maximum, which gives ethos > pathos > logos.
  switch (std::distance(g.begin(), std::max_element(g.begin(), g.end()))) {
    case 0: return "emphasize-credibility";
    case 1: return "emphasize-emotion";
    default: return "emphasize-logic";
  }
}

}  // namespace arena
