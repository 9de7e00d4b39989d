#include "arena/predictor.hpp"

#include "arena/debate_state.hpp"
#include "arena/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace arena {

namespace {

constexpr double kMarginWeight = 0.6;
constexpr double kCoverageWeight = 0.25;
constexpr double kMomentumWeight = 0.15;
constexpr std::int64_t kFullDepthBudgetMs = 2000;

struct TacticProfile {
  std::string_view name;
  double effect;    // margin delta per unit strength
  double base;      // strength with no context
  double trailing;  // bonus per unit of evaluation deficit
  double coverage;  // bonus per unit of coverage deficit
  double late;      // bonus scaled by debate progress
  std::array<std::string_view, 7> keywords;
};

// Indexed by Tactic.
constexpr std::array<TacticProfile, 8> kProfiles{{
    {"rebut", 0.6, 0.55, 0.30, 0.00, 0.00,
     {"wrong", "false", "flawed", "rebut", "incorrect", "fails", "mistaken"}},
    {"counterexample", 0.7, 0.50, 0.25, 0.10, 0.05,
     {"for example", "for instance", "counterexample", "consider the case", "take the case",
      "exception", "case of"}},
    {"cite-evidence", 0.8, 0.60, 0.10, 0.30, 0.00,
     {"study", "studies", "data", "statistic", "percent", "evidence", "research"}},
    {"reframe", 0.5, 0.45, 0.35, 0.00, 0.00,
     {"the real question", "really about", "reframe", "instead", "look at it", "bigger picture",
      "what matters"}},
    {"concede-and-pivot", -0.2, 0.30, 0.20, 0.00, 0.10,
     {"admittedly", "granted", "concede", "while it is true", "although", "fair point",
      "even if"}},
    {"emotional-appeal", 0.6, 0.50, 0.40, 0.00, 0.10,
     {"imagine", "families", "children", "suffer", "fear", "heart", "lives"}},
    {"appeal-to-authority", 0.4, 0.45, 0.05, 0.15, 0.00,
     {"expert", "professor", "according to", "scientists", "institute", "authority",
      "organization"}},
    {"summarize-and-close", 0.3, 0.20, 0.00, 0.00, 0.60,
     {"in summary", "to sum up", "in conclusion", "overall", "ultimately", "to conclude",
      "finally"}},
}};

const TacticProfile& profile(Tactic t) { return kProfiles[static_cast<std::size_t>(t)]; }

const std::set<std::string, std::less<>>& stopwords()
{
  static const std::set<std::string, std::less<>> words{
      "about", "after", "again", "being", "could", "does", "done", "every", "from", "have",
      "into",  "more",  "most",  "much",  "only",  "other", "over", "should", "some", "such",
      "than",  "that",  "their", "them",  "then",  "there", "these", "they", "this", "those",
      "very",  "were",  "what",  "when",  "which", "will",  "with", "would", "your"};
  return words;
}

std::vector<std::string> words_of(std::string_view text)
{
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::set<std::string, std::less<>> topic_facets(std::string_view topic)
{
  std::set<std::string, std::less<>> facets;
  for (auto& w : words_of(topic)) {
    if (w.size() >= 4 && !stopwords().count(w)) {
      facets.insert(std::move(w));
    }
  }
  return facets;
}

double coverage_of(const DebateState& debate, Side side,
                   const std::set<std::string, std::less<>>& facets)
{
  if (facets.empty()) return 0.0;
  std::set<std::string, std::less<>> seen;
  for (const auto& entry : debate.transcript) {
    if (entry.side != side || entry.forfeit) continue;
    for (auto& w : words_of(entry.text)) {
      if (facets.count(w)) seen.insert(std::move(w));
    }
  }
  return static_cast<double>(seen.size()) / static_cast<double>(facets.size());
}

std::string lower(std::string_view text)
{
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Tactic t) { return profile(t).name; }

Tactic parse_tactic(std::string_view text)
{
  for (Tactic t : kAllTactics) {
    if (profile(t).name == text) return t;
  }
  fail(ErrorCode::InvalidArgument, "unknown tactic: " + std::string(text));
}

void SearchConfig::validate() const
{
  require(depth >= 0, ErrorCode::InvalidArgument, "search depth must be >= 0");
  require(branching >= 1, ErrorCode::InvalidArgument, "branching must be >= 1");
  require(algorithm != SearchAlgorithm::Mcts || mcts_iterations >= 1,
          ErrorCode::InvalidArgument, "mcts_iterations must be >= 1");
  require(exploration_constant >= 0.0 && std::isfinite(exploration_constant),
          ErrorCode::InvalidArgument, "exploration_constant must be non-negative");
}

double tactic_effect(Tactic t) { return profile(t).effect; }

double tactic_strength(const GameState& state, Tactic t)
{
  const TacticProfile& p = profile(t);
  const double sign = state.side_to_move == Side::Ai ? 1.0 : -1.0;
  const double trailing = std::max(0.0, -sign * evaluate_state(state));
  const double coverage_gap = std::max(0.0, -sign * state.coverage_margin);
  const double progress =
      state.rounds_total == 0
          ? 0.0
          : static_cast<double>(state.rounds_played) / static_cast<double>(state.rounds_total);
  return std::clamp(p.base + p.trailing * trailing + p.coverage * coverage_gap + p.late * progress,
                    0.0, 1.0);
}

GameState build_game_state(const DebateState& debate)
{
  check_consistency(debate);
  return summarize_debate(debate);
}

GameState summarize_debate(const DebateState& debate)
{
  GameState state;
  state.rounds_total = debate.rounds_total;
  state.rounds_played = std::min(debate.completed_rounds(), debate.rounds_total);
  state.score_margin = debate.cumulative_ai - debate.cumulative_user;
  const auto facets = topic_facets(debate.topic);
  state.coverage_margin =
      coverage_of(debate, Side::Ai, facets) - coverage_of(debate, Side::User, facets);
  if (debate.completed_rounds() > 0) {
    const std::size_t last = 2 * debate.completed_rounds() - 1;
    const auto& user = debate.transcript[last - 1];
    const auto& ai = debate.transcript[last];
    state.momentum = std::clamp((ai.scores.overall - user.scores.overall) / 10.0, -1.0, 1.0);
  }
  state.side_to_move = Side::User;
  return state;
}

std::vector<Move> generate_moves(const GameState& state, std::size_t k)
{
  require(k >= 1, ErrorCode::InvalidArgument, "move count must be >= 1");
  require(!state.terminal(), ErrorCode::InvalidState, "no moves in a terminal state");
  const std::size_t n = std::min(k, kAllTactics.size());
  std::vector<Move> moves;
  moves.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    moves.push_back({kAllTactics[i], tactic_strength(state, kAllTactics[i])});
  }
  return moves;
}

double evaluate_state(const GameState& state)
{
  const double rounds = static_cast<double>(std::max<std::size_t>(state.rounds_played, 1));
  const double raw = kMarginWeight * (state.score_margin / (10.0 * rounds)) +
                     kCoverageWeight * state.coverage_margin + kMomentumWeight * state.momentum;
  return std::clamp(raw, -1.0, 1.0);
}

GameState apply_move(const GameState& state, const Move& move)
{
  require(!state.terminal(), ErrorCode::InvalidState, "cannot move in a terminal state");
  GameState next = state;
  const double delta = tactic_effect(move.tactic) * std::clamp(move.strength_estimate, 0.0, 1.0);
  next.score_margin += state.side_to_move == Side::Ai ? delta : -delta;
  next.applied_moves.push_back(move);
  // The user opens every round, so the AI's reply completes it.
  if (state.side_to_move == Side::Ai) {
    next.rounds_played += 1;
  }
  next.side_to_move = opponent(state.side_to_move);
  return next;
}

MinimaxResult minimax_search(const GameState& state, const SearchConfig& config,
                             const search::TraceSink* trace)
{
  config.validate();
  if (config.depth == 0) {
    return {evaluate_state(state), std::nullopt};
  }
  const DebateGame game{config.branching};
  const auto result = search::alpha_beta(game, state, config.depth, trace);
  return {result.value, result.best};
}

Move mcts_search(const GameState& state, const SearchConfig& config, Rng& rng)
{
  require(config.mcts_iterations >= 1, ErrorCode::InvalidArgument,
          "mcts_iterations must be >= 1");
  require(!state.terminal(), ErrorCode::InvalidState, "no moves in a terminal state");
  SearchConfig checked = config;
  checked.algorithm = SearchAlgorithm::Mcts;
  checked.validate();
  const DebateGame game{config.branching};
  search::MctsOptions options;
  options.iterations = config.mcts_iterations;
  options.exploration = config.exploration_constant;
  const auto result = search::mcts(game, state, options, rng);
  return *result.best;
}

int adjust_depth(const SearchConfig& config, std::int64_t remaining_budget_ms)
{
  require(remaining_budget_ms >= 0, ErrorCode::InvalidArgument,
          "remaining budget must be non-negative");
  if (remaining_budget_ms >= kFullDepthBudgetMs) {
    return config.depth;
  }
  return std::max(1, config.depth - 1);
}

Prediction predict_and_counter(const GameState& state, const SearchConfig& config)
{
  require(!state.terminal(), ErrorCode::InvalidState, "cannot predict in a terminal state");
  require(state.side_to_move == Side::User, ErrorCode::InvalidState,
          "prediction needs the user to move");
  config.validate();

  SearchConfig adjusted = config;
  adjusted.depth = std::max(1, adjust_depth(config, config.time_budget_ms));

  if (config.algorithm == SearchAlgorithm::Mcts) {
    Rng rng(config.seed);
    const Move predicted = mcts_search(state, adjusted, rng);
    const GameState reply_state = apply_move(state, predicted);
    const Move counter = mcts_search(reply_state, adjusted, rng);
    return {predicted, counter};
  }

  const auto root = minimax_search(state, adjusted);
  const Move predicted = *root.best;
  const GameState reply_state = apply_move(state, predicted);
  SearchConfig reply = adjusted;
  reply.depth = std::max(1, adjusted.depth - 1);
  const auto counter = minimax_search(reply_state, reply);
  return {predicted, *counter.best};
}

std::string trace_line(const search::TraceEvent& event)
{
  nlohmann::json j;
  j["depth"] = event.depth;
  j["side"] = event.maximizing ? "ai" : "user";
  if (event.move_index && *event.move_index < kAllTactics.size()) {
    j["move"] = to_string(kAllTactics[*event.move_index]);
  } else {
    j["move"] = nullptr;
  }
  auto finite_or_null = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  j["value"] = finite_or_null(event.value);
  j["alpha"] = finite_or_null(event.alpha);
  j["beta"] = finite_or_null(event.beta);
  return j.dump();
}

Tactic label_tactic(std::string_view sketch)
{
  const std::string text = lower(sketch);
  Tactic best = Tactic::Rebut;
  std::size_t best_hits = 0;
  for (Tactic t : kAllTactics) {
    std::size_t hits = 0;
    for (std::string_view kw : profile(t).keywords) {
      for (auto pos = text.find(kw); pos != std::string::npos; pos = text.find(kw, pos + 1)) {
        ++hits;
      }
    }
    if (hits > best_hits) {
      best_hits = hits;
      best = t;
    }
  }
  return best;
}

std::vector<Move> moves_from_sketches(const GameState& state, std::size_t k,
                                      const std::vector<std::string>& sketches)
{
  require(k >= 1, ErrorCode::InvalidArgument, "move count must be >= 1");
  require(!state.terminal(), ErrorCode::InvalidState, "no moves in a terminal state");
  const std::size_t n = std::min(k, kAllTactics.size());
  std::vector<Move> moves;
  auto add = [&](Tactic t) {
    if (moves.size() < n &&
        std::none_of(moves.begin(), moves.end(), [&](const Move& m) { return m.tactic == t; })) {
      moves.push_back({t, tactic_strength(state, t)});
    }
  };
  for (const auto& sketch : sketches) add(label_tactic(sketch));
  for (Tactic t : kAllTactics) add(t);
  return moves;
}

}  // namespace arena
