#include "arena/selfplay.hpp"

#include "arena/error.hpp"
#include "arena/random.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>

namespace arena {

namespace {

std::string csv_field(std::string_view text)
{
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<MetricsRow> run_selfplay(std::size_t debates, std::uint64_t seed, std::size_t rounds,
                                     const ProviderConfig& providers, EngineConfig base)
{
  require(debates >= 1, ErrorCode::InvalidArgument, "debates must be >= 1");
  base.seed = seed;
  auto gateway = std::make_shared<Gateway>(providers);
  // A frozen clock keeps turn deadlines out of the picture.
  Engine engine(std::move(base), gateway, nullptr, [] { return Timestamp{0}; });

  std::vector<MetricsRow> rows;
  rows.reserve(debates);
  for (std::size_t i = 0; i < debates; ++i) {
    const std::uint64_t debate_seed = derive_seed(seed, i);
    std::string topic = gateway->generate_topics(1, debate_seed).front();
    const DebateState created =
        engine.create_debate(topic, i % 2 == 0 ? "for" : "against", rounds, "selfplay");

    DebateState state = created;
    while (state.phase != Phase::Finished) {
      const Completion argument = gateway->generate_user_argument(state);
      const std::string text = argument.text.empty() ? std::string("(no argument)") : argument.text;
      engine.submit_argument(state.debate_id, text);
      state = engine.get_state(state.debate_id);
    }

    const DebateResult result = engine.finalize(state.debate_id);
    rows.push_back({i, std::move(topic), result.avg_user, result.avg_ai, result.winner,
                    state.rounds_total, debate_seed});
  }
  return rows;
}

std::string selfplay_summary(const std::vector<MetricsRow>& rows)
{
  double ai = 0.0;
  double user = 0.0;
  for (const auto& r : rows) {
    ai += r.avg_ai;
    user += r.avg_user;
  }
  if (!rows.empty()) {
    ai /= static_cast<double>(rows.size());
    user /= static_cast<double>(rows.size());
  }
  return format_score_summary(ai, user);
}

std::string metrics_csv(const std::vector<MetricsRow>& rows)
{
  std::string out(kMetricsHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{},{:.2f},{:.2f},{},{},{}\n", r.debate_index, csv_field(r.topic),
                       r.avg_user, r.avg_ai, to_string(r.winner), r.rounds, r.seed);
  }
  return out;
}

void export_metrics(const std::vector<MetricsRow>& rows, const std::filesystem::path& path)
{
  write_text_file(path, metrics_csv(rows));
}

std::string_view to_string(FitnessProfile p)
{
  switch (p) {
    case FitnessProfile::Margin: return "margin";
    case FitnessProfile::PathosFavoring: return "pathos_favoring";
    case FitnessProfile::LogosFavoring: return "logos_favoring";
  }
  return "margin";
}

FitnessProfile parse_fitness_profile(std::string_view text)
{
  if (text == "margin") return FitnessProfile::Margin;
  if (text == "pathos_favoring") return FitnessProfile::PathosFavoring;
  if (text == "logos_favoring") return FitnessProfile::LogosFavoring;
  fail(ErrorCode::InvalidArgument, "unknown fitness profile: " + std::string(text));
}

double profile_fitness(FitnessProfile profile, const Strategy& s)
{
  switch (profile) {
    case FitnessProfile::PathosFavoring: return s.pathos;
    case FitnessProfile::LogosFavoring: return s.logos;
    case FitnessProfile::Margin: break;
  }
  // Synthetic margin in [-2, 2] mapped through the engine's fitness function.
  const double margin = 20.0 * (0.25 * s.ethos + 0.45 * s.pathos + 0.30 * s.logos) - 7.0;
  return evaluate_fitness({0, {margin}});
}

GenerationSummary summarize(const Population& population, FitnessProfile profile)
{
  require(!population.members.empty(), ErrorCode::InvalidArgument, "population is empty");
  GenerationSummary s;
  s.generation = population.generation;
  s.best_fitness = -1.0;
  for (const auto& m : population.members) {
    s.mean_ethos += m.ethos;
    s.mean_pathos += m.pathos;
    s.mean_logos += m.logos;
    s.best_fitness = std::max(s.best_fitness, profile_fitness(profile, m));
  }
  const auto n = static_cast<double>(population.members.size());
  s.mean_ethos /= n;
  s.mean_pathos /= n;
  s.mean_logos /= n;
  return s;
}

std::vector<GenerationSummary> run_evolution_experiment(std::size_t generations,
                                                        std::size_t population_size,
                                                        FitnessProfile profile,
                                                        std::uint64_t seed, GaConfig base)
{
  require(generations >= 1, ErrorCode::InvalidArgument, "generations must be >= 1");
  base.population_size = population_size;
  base.validate();

  Population pop = init_population(population_size, seed);
  std::vector<GenerationSummary> out;
  out.reserve(generations + 1);
  out.push_back(summarize(pop, profile));
  std::vector<double> fitnesses(population_size);
  for (std::size_t g = 1; g <= generations; ++g) {
    std::transform(pop.members.begin(), pop.members.end(), fitnesses.begin(),
                   [&](const Strategy& s) { return profile_fitness(profile, s); });
    Rng rng(derive_seed(seed, g));
    pop = evolve_generation(pop, fitnesses, base, rng);
    out.push_back(summarize(pop, profile));
  }
  return out;
}

std::string evolution_csv(const std::vector<GenerationSummary>& rows)
{
  std::string out = "generation,mean_ethos,mean_pathos,mean_logos,best_fitness\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.generation, r.mean_ethos,
                       r.mean_pathos, r.mean_logos, r.best_fitness);
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  require(out.good(), ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace arena
