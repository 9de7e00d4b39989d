// Offline experiment CLI: self-play debates, strategy evolution, topics.

#include "arena/config.hpp"
#include "arena/error.hpp"
#include "arena/gateway.hpp"
#include "arena/selfplay.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <iostream>

namespace {

int run(int argc, char** argv)
{
  CLI::App app{"Debate arena experiments"};
  app.require_subcommand(1);
  std::optional<std::string> config_path;
  app.add_option("--config", config_path, "JSON config file");

  auto* selfplay = app.add_subcommand("selfplay", "run engine-vs-engine debates");
  std::size_t debates = 23;
  std::size_t rounds = 3;
  std::uint64_t seed = 0;
  std::string provider = "stub";
  std::optional<std::string> out;
  selfplay->add_option("--debates", debates, "number of debates")->check(CLI::PositiveNumber);
  selfplay->add_option("--rounds", rounds, "rounds per debate");
  selfplay->add_option("--seed", seed, "64-bit seed");
  selfplay->add_option("--provider", provider, "stub or http")
      ->check(CLI::IsMember({"stub", "http"}));
  selfplay->add_option("--out", out, "CSV output path (stdout when omitted)");

  auto* evolve = app.add_subcommand("evolve", "evolve a population under a synthetic fitness");
  std::size_t generations = 50;
  std::size_t population = 20;
  std::string profile = "margin";
  evolve->add_option("--generations", generations, "generations")->check(CLI::PositiveNumber);
  evolve->add_option("--population", population, "population size");
  evolve->add_option("--profile", profile, "margin, pathos_favoring or logos_favoring")
      ->check(CLI::IsMember({"margin", "pathos_favoring", "logos_favoring"}));
  evolve->add_option("--seed", seed, "64-bit seed");
  evolve->add_option("--out", out, "CSV output path (stdout when omitted)");

  auto* topics = app.add_subcommand("topics", "print generated debate topics");
  std::size_t count = 5;
  std::uint64_t salt = 0;
  topics->add_option("--count", count, "number of topics")->check(CLI::PositiveNumber);
  topics->add_option("--salt", salt, "generation salt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const arena::AppConfig cfg = arena::load_app_config(config_path);

  if (*selfplay) {
    const arena::ProviderConfig providers =
        provider == "stub" ? arena::ProviderConfig::all_stub() : cfg.providers;
    const auto rows = arena::run_selfplay(debates, seed, rounds, providers, cfg.engine);
    if (out) {
      arena::export_metrics(rows, *out);
    } else {
      std::cout << arena::metrics_csv(rows);
    }
    std::cerr << arena::selfplay_summary(rows);
  } else if (*evolve) {
    const auto rows = arena::run_evolution_experiment(
        generations, population, arena::parse_fitness_profile(profile), seed, cfg.engine.ga);
    const std::string csv = arena::evolution_csv(rows);
    if (out) {
      arena::write_text_file(*out, csv);
    } else {
      std::cout << csv;
    }
    const auto& last = rows.back();
    fmt::print(stderr, "final means: ethos {:.3f} pathos {:.3f} logos {:.3f}\n",
               last.mean_ethos, last.mean_pathos, last.mean_logos);
  } else if (*topics) {
    arena::Gateway gateway(cfg.providers);
    for (const auto& t : gateway.generate_topics(count, salt)) std::cout << t << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  try {
    return run(argc, argv);
  } catch (const arena::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return e.code() == arena::ErrorCode::InvalidArgument ? 2 : 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
