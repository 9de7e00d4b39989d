#include "arena/debate_state.hpp"
#include "arena/error.hpp"
#include "arena/serialization.hpp"

#include <doctest.h>

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

TranscriptEntry entry(Side side, double overall, std::string text = "words")
{
  TranscriptEntry e{side, std::move(text), {}, false};
  e.scores.overall = overall;
  return e;
}

DebateState two_rounds()
{
  DebateState d;
  d.debate_id = "s";
  d.topic = "t";
  d.current_round = 3;
  d.transcript = {entry(Side::User, 4), entry(Side::Ai, 6), entry(Side::User, 5),
                  entry(Side::Ai, 3)};
  d.cumulative_user = 9;
  d.cumulative_ai = 9;
  return d;
}

}  // namespace

TEST_SUITE("debate_state")
{
  TEST_CASE("aggregate_rounds reproduces the reported averages")
  {
    const std::vector<std::pair<double, double>> series{{2.50, 2.70}, {2.67, 2.72}, {2.84, 2.74}};
    double u = 0;
    double a = 0;
    for (const auto& [x, y] : series) {
      u += x;
      a += y;
    }
    const DebateResult r = aggregate_rounds(series);
    CHECK(r.avg_user == doctest::Approx(u / 3).epsilon(0.005));
    CHECK(r.avg_ai == 2.72);
    CHECK(r.avg_user == 2.67);
    CHECK(r.winner == Winner::Ai);
    CHECK(format_score_summary(r.avg_ai, r.avg_user) ==
          "Average AI Score: 2.72\nAverage User Score: 2.67\n");
  }

  TEST_CASE("draws are decided at two decimals")
  {
    CHECK(aggregate_rounds({{5, 5}, {6, 6}}).winner == Winner::Draw);
    CHECK(aggregate_rounds({{5.001, 5.004}}).winner == Winner::Draw);
    CHECK(aggregate_rounds({{5.10, 5.00}}).winner == Winner::User);
    CHECK(aggregate_rounds({}).winner == Winner::Draw);
  }

  TEST_CASE("round2")
  {
    CHECK(round2(2.675000001) == 2.68);
    CHECK(round2(6.7) == 6.7);
    CHECK(round2(0.0) == 0.0);
  }

  TEST_CASE("check_consistency")
  {
    CHECK_NOTHROW(check_consistency(two_rounds()));
    CHECK_NOTHROW(check_consistency(DebateState{}));

    DebateState same = two_rounds();
    same.ai_position = same.user_position;
    CHECK(code_of([&] { check_consistency(same); }) == ErrorCode::InvalidState);

    DebateState order = two_rounds();
    std::swap(order.transcript[0], order.transcript[1]);
    CHECK(code_of([&] { check_consistency(order); }) == ErrorCode::InvalidState);

    DebateState sums = two_rounds();
    sums.cumulative_user = 10;
    CHECK(code_of([&] { check_consistency(sums); }) == ErrorCode::InvalidState);

    DebateState count = two_rounds();
    count.current_round = 2;
    CHECK(code_of([&] { check_consistency(count); }) == ErrorCode::InvalidState);

    DebateState forfeit = two_rounds();
    forfeit.transcript[2].forfeit = true;
    CHECK(code_of([&] { check_consistency(forfeit); }) == ErrorCode::InvalidState);
    forfeit.transcript[2].text.clear();
    forfeit.transcript[2].scores.overall = 0;
    forfeit.cumulative_user = 4;
    CHECK_NOTHROW(check_consistency(forfeit));

    DebateState finished = two_rounds();
    finished.rounds_total = 2;
    finished.current_round = 2;
    finished.phase = Phase::Finished;
    CHECK_NOTHROW(check_consistency(finished));
  }

  TEST_CASE("last_argument")
  {
    const DebateState d = two_rounds();
    CHECK(d.last_argument(Side::Ai) == "words");
    CHECK(DebateState{}.last_argument(Side::User).empty());
    CHECK(d.completed_rounds() == 2);
  }

  TEST_CASE("enum strings")
  {
    CHECK(parse_position("for") == Position::For);
    CHECK(complement(Position::For) == Position::Against);
    CHECK(code_of([] { parse_position("maybe"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { parse_position("For"); }) == ErrorCode::InvalidArgument);
    for (auto p : {Phase::AwaitingUser, Phase::Processing, Phase::Finished}) {
      CHECK(parse_phase(to_string(p)) == p);
    }
    CHECK(to_string(Phase::AwaitingUser) == "awaiting_user");
    CHECK(to_string(Winner::Ai) == "ai");
  }

  TEST_CASE("state JSON round-trips")
  {
    DebateState d = two_rounds();
    d.last_prediction = Move{Tactic::Reframe, 0.123456789012345};
    d.last_hint = "emphasize-logic";
    const nlohmann::json j = d;
    CHECK(j.get<DebateState>() == d);
    CHECK(j["phase"] == "awaiting_user");

    RoundResult r;
    r.suggestions = {"a", "b", "c"};
    r.predicted_move = {Tactic::Rebut, 0.5};
    const nlohmann::json rj = r;
    for (auto key : {"ai_response", "user_scores", "ai_scores", "feedback", "suggestions",
                     "strategy_hint", "predicted_move", "round", "debate_over", "degraded"}) {
      CHECK(rj.contains(key));
    }
    CHECK(rj.get<RoundResult>() == r);
  }
}
