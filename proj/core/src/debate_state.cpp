#include "arena/debate_state.hpp"

#include "arena/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace arena {

std::string_view to_string(Phase p)
{
  switch (p) {
    case Phase::AwaitingUser: return "awaiting_user";
    case Phase::Processing: return "processing";
    case Phase::Finished: return "finished";
  }
  return "awaiting_user";
}

Phase parse_phase(std::string_view text)
{
  if (text == "awaiting_user") return Phase::AwaitingUser;
  if (text == "processing") return Phase::Processing;
  if (text == "finished") return Phase::Finished;
  fail(ErrorCode::InvalidArgument, "unknown phase: " + std::string(text));
}

std::string_view to_string(Winner w)
{
  switch (w) {
    case Winner::User: return "user";
    case Winner::Ai: return "ai";
    case Winner::Draw: return "draw";
  }
  return "draw";
}

Winner parse_winner(std::string_view text)
{
  if (text == "user") return Winner::User;
  if (text == "ai") return Winner::Ai;
  if (text == "draw") return Winner::Draw;
  fail(ErrorCode::InvalidArgument, "unknown winner: " + std::string(text));
}

std::string_view DebateState::last_argument(Side side) const
{
  for (auto it = transcript.rbegin(); it != transcript.rend(); ++it) {
    if (it->side == side) return it->text;
  }
  return {};
}

void check_consistency(const DebateState& state)
{
  auto invalid = [](const std::string& what) { fail(ErrorCode::InvalidState, what); };

  if (state.ai_position == state.user_position) invalid("both sides hold the same position");
  if (state.rounds_total == 0) invalid("rounds_total must be positive");
  if (state.current_round < 1 || state.current_round > state.rounds_total) {
    invalid("current_round outside [1, rounds_total]");
  }
  const std::size_t expected = state.phase == Phase::Finished ? 2 * state.rounds_total
                                                               : 2 * (state.current_round - 1);
  if (state.transcript.size() != expected) {
    invalid(fmt::format("transcript has {} entries, expected {}", state.transcript.size(),
                        expected));
  }

  double user_sum = 0.0;
  double ai_sum = 0.0;
  for (std::size_t i = 0; i < state.transcript.size(); ++i) {
    const auto& entry = state.transcript[i];
    const Side expected_side = i % 2 == 0 ? Side::User : Side::Ai;
    if (entry.side != expected_side) invalid(fmt::format("entry {} breaks user/ai alternation", i));
    if (entry.forfeit) {
      if (entry.side != Side::User || entry.scores != EvaluationScores{}) {
        invalid(fmt::format("entry {} is a malformed forfeit", i));
      }
    } else if (entry.text.empty()) {
      invalid(fmt::format("entry {} has scores without an argument", i));
    }
    (entry.side == Side::User ? user_sum : ai_sum) += entry.scores.overall;
  }
  if (std::abs(user_sum - state.cumulative_user) > 1e-9 ||
      std::abs(ai_sum - state.cumulative_ai) > 1e-9) {
    invalid("cumulative scores disagree with the transcript");
  }
}

double round2(double value) { return std::round(value * 100.0) / 100.0; }

DebateResult aggregate_rounds(std::vector<std::pair<double, double>> per_round)
{
  DebateResult result;
  if (!per_round.empty()) {
    double user = 0.0;
    double ai = 0.0;
    for (const auto& [u, a] : per_round) {
      user += u;
      ai += a;
    }
    const double n = static_cast<double>(per_round.size());
    result.avg_user = round2(user / n);
    result.avg_ai = round2(ai / n);
  }
  if (result.avg_ai > result.avg_user) {
    result.winner = Winner::Ai;
  } else if (result.avg_user > result.avg_ai) {
    result.winner = Winner::User;
  } else {
    result.winner = Winner::Draw;
  }
  result.per_round = std::move(per_round);
  return result;
}

std::string format_score_summary(double avg_ai, double avg_user)
{
  return fmt::format("Average AI Score: {:.2f}\nAverage User Score: {:.2f}\n", avg_ai, avg_user);
}

}  // namespace arena
