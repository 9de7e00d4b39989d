#include "arena/error.hpp"
#include "arena/selfplay.hpp"

#include "support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace arena;

namespace {

// Minimal RFC 4180 reader used to check the writer.
std::vector<std::vector<std::string>> read_csv(const std::string& text)
{
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

ErrorCode code_of(auto&& fn)
{
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidState;
}

}  // namespace

TEST_SUITE("selfplay")
{
  TEST_CASE("23 debates, deterministic")
  {
    const auto rows = run_selfplay(23, 7, 3, ProviderConfig::all_stub());
    REQUIRE(rows.size() == 23);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].debate_index == i);
      CHECK(rows[i].rounds == 3);
      CHECK(rows[i].seed == derive_seed(7, i));
      CHECK(rows[i].avg_user >= 0.0);
      CHECK(rows[i].avg_ai <= 10.0);
    }
    CHECK(metrics_csv(rows) == metrics_csv(run_selfplay(23, 7, 3, ProviderConfig::all_stub())));
    CHECK(metrics_csv(rows) != metrics_csv(run_selfplay(23, 8, 3, ProviderConfig::all_stub())));
    CHECK(code_of([] { run_selfplay(0, 1, 3, ProviderConfig::all_stub()); }) ==
          ErrorCode::InvalidArgument);
  }

  TEST_CASE("csv round-trip and summary")
  {
    auto rows = run_selfplay(5, 3, 2, ProviderConfig::all_stub());
    rows[1].topic = "A \"quoted\", comma topic";
    const auto parsed = read_csv(metrics_csv(rows));
    REQUIRE(parsed.size() == 6);
    CHECK(parsed[0].size() == 7);
    std::string header;
    for (std::size_t i = 0; i < parsed[0].size(); ++i) header += (i ? "," : "") + parsed[0][i];
    CHECK(header == kMetricsHeader);
    CHECK(parsed[2][1] == rows[1].topic);

    double sum_user = 0;
    double sum_ai = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = parsed[i + 1];
      CHECK(r[0] == std::to_string(i));
      CHECK(std::stod(r[2]) == doctest::Approx(rows[i].avg_user).epsilon(0.006));
      CHECK(r[4] == to_string(rows[i].winner));
      CHECK(std::stoull(r[6]) == rows[i].seed);
      sum_user += rows[i].avg_user;
      sum_ai += rows[i].avg_ai;
    }
    CHECK(selfplay_summary(rows) == format_score_summary(sum_ai / 5, sum_user / 5));
    CHECK(metrics_csv({}) == std::string(kMetricsHeader) + "\n");
  }

  TEST_CASE("export")
  {
    test::TempDir dir;
    const auto rows = run_selfplay(2, 1, 1, ProviderConfig::all_stub());
    export_metrics(rows, dir.path() / "m.csv");
    std::ifstream in(dir.path() / "m.csv");
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == metrics_csv(rows));
    CHECK(code_of([&] { export_metrics(rows, dir.path() / "no" / "such" / "m.csv"); }) ==
          ErrorCode::IoError);
  }

  TEST_CASE("evolution experiment")
  {
    const auto rows = run_evolution_experiment(50, 20, FitnessProfile::PathosFavoring, 1);
    REQUIRE(rows.size() == 51);
    CHECK(rows.front().generation == 0);
    CHECK(rows.back().generation == 50);
    CHECK(rows.back().mean_pathos > 0.5);
    for (const auto& r : rows) {
      CHECK(r.mean_ethos + r.mean_pathos + r.mean_logos == doctest::Approx(1.0));
    }
    for (std::size_t g = 1; g < rows.size(); ++g) {
      CHECK(rows[g].best_fitness >= rows[g - 1].best_fitness - 1e-12);
    }
    CHECK(rows == run_evolution_experiment(50, 20, FitnessProfile::PathosFavoring, 1));
    CHECK(code_of([] { run_evolution_experiment(0, 20, FitnessProfile::Margin, 1); }) ==
          ErrorCode::InvalidArgument);

    const auto csv = read_csv(evolution_csv(rows));
    CHECK(csv.size() == 52);
    CHECK(std::stod(csv.back()[2]) == doctest::Approx(rows.back().mean_pathos).epsilon(1e-6));
  }

  TEST_CASE("fitness profiles")
  {
    const Strategy s{0.2, 0.5, 0.3};
    CHECK(profile_fitness(FitnessProfile::PathosFavoring, s) == doctest::Approx(0.5));
    CHECK(profile_fitness(FitnessProfile::LogosFavoring, s) == doctest::Approx(0.3));
    const double m = profile_fitness(FitnessProfile::Margin, s);
    CHECK(m >= 0.0);
    CHECK(m <= 1.0);
    CHECK(parse_fitness_profile("pathos_favoring") == FitnessProfile::PathosFavoring);
    CHECK(code_of([] { parse_fitness_profile("greedy"); }) == ErrorCode::InvalidArgument);
  }
}
