#include "arena/debate_state.hpp"
#include "arena/error.hpp"
#include "arena/gateway.hpp"
#include "arena/rubric.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace arena;

namespace {

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

std::array<int, 4> oracle_dims(std::uint64_t h)
{
  std::array<int, 4> d{};
  for (int k = 0; k < 4; ++k) d[k] = static_cast<int>(((h >> (8 * k)) & 0xffU) % 11);
  return d;
}

DebateState context()
{
  DebateState d;
  d.debate_id = "ctx";
  d.topic = "Homework should be banned in primary schools";
  return d;
}

std::size_t suggestion_count(const std::string& text)
{
  std::size_t n = 0;
  for (auto pos = text.find("- Improve "); pos != std::string::npos;
       pos = text.find("- Improve ", pos + 1)) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_SUITE("rubric")
{
  TEST_CASE("combine_scores")
  {
    const RubricWeights w;
    CHECK(combine_scores({10, 10, 10, 10}, w) == doctest::Approx(10.0));
    CHECK(combine_scores({8, 6, 7, 5}, w) == doctest::Approx(6.70).epsilon(1e-12));
    CHECK(combine_scores({0, 0, 0, 0}, w) == 0.0);
    const RubricWeights bad{0.5, 0.5, 0.5, 0.5};
    CHECK(code_of([&] { combine_scores({1, 1, 1, 1}, bad); }) == ErrorCode::InvalidArgument);
    const RubricWeights negative{1.2, -0.2, 0.0, 0.0};
    CHECK(code_of([&] { negative.validate(); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("combine_scores is monotone and convex")
  {
    const RubricWeights w;
    Rng rng(3);
    for (int i = 0; i < 2000; ++i) {
      std::array<int, 4> d{};
      for (auto& x : d) x = static_cast<int>(uniform_index(rng, 11));
      const double base = combine_scores(d, w);
      CHECK(base >= *std::min_element(d.begin(), d.end()) - 1e-9);
      CHECK(base <= *std::max_element(d.begin(), d.end()) + 1e-9);
      const std::size_t k = uniform_index(rng, 4);
      if (d[k] < 10) {
        auto up = d;
        ++up[k];
        CHECK(combine_scores(up, w) >= base);
      }
    }
  }

  TEST_CASE("make_scores clamps dimensions")
  {
    const auto s = make_scores({-3, 14, 5, 10}, RubricWeights{});
    CHECK(s.relevance == 0);
    CHECK(s.persuasiveness == 10);
    CHECK(s.overall >= 0.0);
    CHECK(s.overall <= 10.0);
  }

  TEST_CASE("stub evaluator reads the hash bytes")
  {
    StubProvider stub;
    CompletionRequest req;
    req.role = ProviderRole::Evaluator;
    req.prompt = "P1";
    const auto dims = parse_dimensions(stub.complete(req));
    REQUIRE(dims.has_value());
    // FNV-1a("P1") = 0x09429707b5d2bc9a
    CHECK(*dims == std::array<int, 4>{0, 1, 1, 5});
    CHECK(*dims == oracle_dims(test::oracle_fnv("P1")));
  }

  TEST_CASE("score_argument under the stub provider")
  {
    auto gw = test::stub_gateway();
    const DebateState ctx = context();
    const std::string arg = "Children need free time to play and rest.";
    bool degraded = false;
    const auto s1 = score_argument(arg, ctx, Side::User, RubricWeights{}, *gw, &degraded);
    const auto s2 = score_argument(arg, ctx, Side::User, RubricWeights{}, *gw);
    CHECK(s1 == s2);
    CHECK_FALSE(degraded);
    for (int d : s1.dimensions()) {
      CHECK(d >= 0);
      CHECK(d <= 10);
    }
    const auto expected =
        oracle_dims(test::oracle_fnv(Gateway::render_evaluator_prompt(arg, ctx, Side::User)));
    CHECK(s1.dimensions() == expected);
    CHECK(s1.overall == doctest::Approx(combine_scores(expected, RubricWeights{})));

    CHECK(code_of([&] { score_argument("", ctx, Side::User, RubricWeights{}, *gw); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([&] { score_argument("  \n", ctx, Side::User, RubricWeights{}, *gw); }) ==
          ErrorCode::InvalidArgument);
  }

  TEST_CASE("score_argument falls back when the evaluator is down")
  {
    auto gw = test::gateway_with(ProviderRole::Evaluator,
                                 std::make_shared<test::FailingProvider>());
    bool degraded = false;
    const auto s = score_argument("Some argument", context(), Side::Ai, RubricWeights{}, *gw,
                                  &degraded);
    CHECK(degraded);
    for (int d : s.dimensions()) CHECK(d <= 10);
  }

  TEST_CASE("flag_fallacies")
  {
    const std::string text = "Everyone knows this is true.";
    const auto flags = flag_fallacies(text);
    REQUIRE(flags.size() == 1);
    CHECK(flags[0].kind == FallacyKind::Bandwagon);
    CHECK(flags[0].begin == 0);
    CHECK(flags[0].end == 14);
    CHECK(text.substr(flags[0].begin, flags[0].end - flags[0].begin) == "Everyone knows");

    CHECK(flag_fallacies("Solar capacity grew 24% last year.").empty());
    CHECK(code_of([] { flag_fallacies(""); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("gapped phrases stay within one sentence")
  {
    const auto hit = flag_fallacies("Either we ban cars or the city chokes.");
    REQUIRE(hit.size() == 1);
    CHECK(hit[0].kind == FallacyKind::FalseDilemma);
    CHECK(hit[0].begin == 0);
    CHECK(flag_fallacies("Either we act. Or not.").empty());
    CHECK(flag_fallacies("Neither weapon nor armor helps.").empty());
  }

  TEST_CASE("fallacy spans are in bounds, sorted and never repeat an entry")
  {
    const std::string text =
        "Everyone knows it. EVERYONE KNOWS it twice. If we don't act now it will be a disaster, "
        "and people like you always happens to agree.";
    const auto flags = flag_fallacies(text);
    CHECK(flags.size() >= 5);
    for (std::size_t i = 0; i < flags.size(); ++i) {
      CHECK(flags[i].begin < flags[i].end);
      CHECK(flags[i].end <= text.size());
      if (i > 0) CHECK(flags[i - 1].begin <= flags[i].begin);
      for (std::size_t j = 0; j < i; ++j) {
        CHECK_FALSE((flags[j].kind == flags[i].kind && flags[j].begin == flags[i].begin));
      }
    }
  }

  TEST_CASE("lexicon parsing")
  {
    const auto lex = FallacyLexicon::parse("# comment\n\nfoo bar\tbandwagon\nx ... y\tfalse-dilemma\n");
    REQUIRE(lex.entries().size() == 2);
    CHECK(lex.entries()[1].parts.size() == 2);
    CHECK(flag_fallacies("so FOO BAR indeed", lex).size() == 1);
    CHECK(FallacyLexicon::builtin().entries().size() >= 12);

    try {
      FallacyLexicon::parse("ok\tbandwagon\nno tab here\n");
      FAIL("expected corrupt-data");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CorruptData);
      CHECK(e.line() == 2);
    }
    CHECK(code_of([] { FallacyLexicon::parse("x\tnot-a-kind\n"); }) == ErrorCode::CorruptData);
  }

  TEST_CASE("feedback template")
  {
    const auto all_ten = make_scores({10, 10, 10, 10}, RubricWeights{});
    const std::string top = render_feedback_template(all_ten, {}, "arg");
    for (auto name : kDimensionNames) CHECK(top.find(std::string(name)) != std::string::npos);
    CHECK(suggestion_count(top) == 0);

    const auto mixed = make_scores({8, 6, 7, 5}, RubricWeights{});
    const auto flags = flag_fallacies("Everyone knows that.");
    const std::string text = render_feedback_template(mixed, flags, "Everyone knows that.");
    CHECK(suggestion_count(text) == 2);
    CHECK(text.find("Improve Persuasiveness") != std::string::npos);
    CHECK(text.find("Improve Evidence Usage") != std::string::npos);
    CHECK(text.find("Overall: 6.70/10") != std::string::npos);
    CHECK(text.find("bandwagon") != std::string::npos);
  }

  TEST_CASE("build_feedback is deterministic with stubs")
  {
    auto gw = test::stub_gateway();
    const auto s = make_scores({3, 9, 4, 8}, RubricWeights{});
    bool degraded = false;
    const auto a = build_feedback(s, {}, "An argument.", *gw, &degraded);
    const auto b = build_feedback(s, {}, "An argument.", *gw);
    CHECK(a == b);
    CHECK(a == render_feedback_template(s, {}, "An argument."));
    CHECK_FALSE(degraded);
  }

  TEST_CASE("fallacy kinds round-trip")
  {
    for (auto k : {FallacyKind::Bandwagon, FallacyKind::AdHominem, FallacyKind::FalseDilemma,
                   FallacyKind::HastyGeneralization, FallacyKind::AppealToFear}) {
      CHECK(parse_fallacy_kind(to_string(k)) == k);
    }
  }
}
