#pragma once

#include "arena/predictor.hpp"
#include "arena/rubric.hpp"
#include "arena/side.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arena {

enum class Phase { AwaitingUser, Processing, Finished };

std::string_view to_string(Phase p);
Phase parse_phase(std::string_view text);

/// Milliseconds since the Unix epoch.
using Timestamp = std::int64_t;

struct TranscriptEntry {
  Side side = Side::User;
  std::string text;
  EvaluationScores scores;
  bool forfeit = false;

  bool operator==(const TranscriptEntry&) const = default;
};

struct DebateState {
  std::string debate_id;
  std::string topic;
  Position user_position = Position::For;
  Position ai_position = Position::Against;
  std::size_t rounds_total = 3;
  std::size_t current_round = 1;
  std::vector<TranscriptEntry> transcript;
  double cumulative_user = 0.0;
  double cumulative_ai = 0.0;
  Phase phase = Phase::AwaitingUser;
  Timestamp turn_deadline = 0;
  std::string ga_population_key;
  std::string last_hint;
  std::optional<Move> last_prediction;
  std::string subject;  // authenticated caller that created the debate

  Position position_of(Side s) const { return s == Side::User ? user_position : ai_position; }
  std::size_t completed_rounds() const { return transcript.size() / 2; }
  /// Most recent argument text from `side`, empty when it has not spoken.
  std::string_view last_argument(Side side) const;

  bool operator==(const DebateState&) const = default;
};

/// Throws invalid-state when alternation, round counters, or cumulative
/// sums disagree with the transcript.
void check_consistency(const DebateState& state);

struct RoundResult {
  std::string ai_response;
  EvaluationScores user_scores;
  EvaluationScores ai_scores;
  std::string feedback;
  std::vector<std::string> suggestions;
  std::string strategy_hint;
  Move predicted_move;
  std::size_t round = 0;
  bool debate_over = false;
  bool degraded = false;

  bool operator==(const RoundResult&) const = default;
};

enum class Winner { User, Ai, Draw };

std::string_view to_string(Winner w);
Winner parse_winner(std::string_view text);

struct DebateResult {
  Winner winner = Winner::Draw;
  double avg_user = 0.0;
  double avg_ai = 0.0;
  std::vector<std::pair<double, double>> per_round;  // (user overall, ai overall)

  bool operator==(const DebateResult&) const = default;
};

/// Rounds half away from zero to two decimals.
double round2(double value);

/// Averages and winner from per-round (user, ai) overall scores.
DebateResult aggregate_rounds(std::vector<std::pair<double, double>> per_round);

/// "Average AI Score: X.XX\nAverage User Score: Y.YY\n"
std::string format_score_summary(double avg_ai, double avg_user);

}  // namespace arena
