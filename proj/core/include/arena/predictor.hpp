#pragma once

#include "arena/random.hpp"
#include "arena/search.hpp"
#include "arena/side.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arena {

struct DebateState;

/// Closed tactic taxonomy, in declaration order.
enum class Tactic {
  Rebut,
  Counterexample,
  CiteEvidence,
  Reframe,
  ConcedeAndPivot,
  EmotionalAppeal,
  AppealToAuthority,
  SummarizeAndClose,
};

inline constexpr std::array<Tactic, 8> kAllTactics{
    Tactic::Rebut,           Tactic::Counterexample,  Tactic::CiteEvidence,
    Tactic::Reframe,         Tactic::ConcedeAndPivot, Tactic::EmotionalAppeal,
    Tactic::AppealToAuthority, Tactic::SummarizeAndClose};

std::string_view to_string(Tactic t);
Tactic parse_tactic(std::string_view text);

struct Move {
  Tactic tactic = Tactic::Rebut;
  double strength_estimate = 0.0;

  bool operator==(const Move&) const = default;
};

struct GameState {
  double score_margin = 0.0;  // cumulative ai minus user
  std::size_t rounds_played = 0;
  std::size_t rounds_total = 3;
  double coverage_margin = 0.0;
  double momentum = 0.0;
  Side side_to_move = Side::User;
  std::vector<Move> applied_moves;

  bool terminal() const { return rounds_played >= rounds_total; }
  bool operator==(const GameState&) const = default;
};

enum class SearchAlgorithm { Minimax, Mcts };

struct SearchConfig {
  int depth = 2;
  std::size_t branching = 4;
  SearchAlgorithm algorithm = SearchAlgorithm::Minimax;
  std::size_t mcts_iterations = 200;
  double exploration_constant = 1.414;
  std::int64_t time_budget_ms = 5000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Signed margin delta per unit strength for the side that plays the tactic.
double tactic_effect(Tactic t);

/// Deterministic strength heuristic for `t` played by the side to move.
double tactic_strength(const GameState& state, Tactic t);

/// Game features of a debate without consistency checks; usable mid-round.
GameState summarize_debate(const DebateState& debate);

/// Checked variant: inconsistent transcripts are invalid-state.
GameState build_game_state(const DebateState& debate);

std::vector<Move> generate_moves(const GameState& state, std::size_t k);

double evaluate_state(const GameState& state);

GameState apply_move(const GameState& state, const Move& move);

/// Adapter exposing the debate game to the generic search templates.
struct DebateGame {
  using State = GameState;
  using Move = arena::Move;

  std::size_t branching = 4;

  std::vector<Move> moves(const State& s) const { return generate_moves(s, branching); }
  State apply(const State& s, const Move& m) const { return apply_move(s, m); }
  double evaluate(const State& s) const { return evaluate_state(s); }
  bool maximizing(const State& s) const { return s.side_to_move == Side::Ai; }
  bool terminal(const State& s) const { return s.terminal(); }
};

struct MinimaxResult {
  double value = 0.0;
  std::optional<Move> best;
};

MinimaxResult minimax_search(const GameState& state, const SearchConfig& config,
                             const search::TraceSink* trace = nullptr);

Move mcts_search(const GameState& state, const SearchConfig& config, Rng& rng);

int adjust_depth(const SearchConfig& config, std::int64_t remaining_budget_ms);

struct Prediction {
  Move predicted_user;
  Move counter;
};

Prediction predict_and_counter(const GameState& state, const SearchConfig& config);

/// Formats one trace node as a JSON line {depth, side, move, value, alpha, beta}.
std::string trace_line(const search::TraceEvent& event);

/// Nearest tactic for a free-text argument sketch (keyword match, declaration
/// order on ties, rebut when nothing matches).
Tactic label_tactic(std::string_view sketch);

/// LLM-backed move generation: labels each sketch with its nearest tactic,
/// drops duplicates, then fills up to min(k, 8) moves in declaration order.
std::vector<Move> moves_from_sketches(const GameState& state, std::size_t k,
                                      const std::vector<std::string>& sketches);

}  // namespace arena
