#pragma once

// Game-agnostic adversarial search. A game supplies value-type states and
// moves; values are always from the maximizing player's point of view.

#include "arena/random.hpp"

#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace arena::search {

template <class G>
concept AdversarialGame = requires(const G& g, const typename G::State& s,
                                   const typename G::Move& m) {
  { g.moves(s) } -> std::convertible_to<std::vector<typename G::Move>>;
  { g.apply(s, m) } -> std::convertible_to<typename G::State>;
  { g.evaluate(s) } -> std::convertible_to<double>;
  { g.maximizing(s) } -> std::convertible_to<bool>;
  { g.terminal(s) } -> std::convertible_to<bool>;
};

struct TraceEvent {
  int depth = 0;  // remaining plies at the node
  bool maximizing = true;
  std::optional<std::size_t> move_index;  // move that led here; none at the root
  double value = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

using TraceSink = std::function<void(const TraceEvent&)>;

template <class Move>
struct SearchResult {
  double value = 0.0;
  std::optional<Move> best;
  std::optional<std::size_t> best_index;
  std::size_t nodes = 0;
};

namespace detail {

template <AdversarialGame G>
double alpha_beta(const G& game, const typename G::State& state, int depth, double alpha,
                  double beta, std::optional<std::size_t> via, const TraceSink* trace,
                  std::size_t& nodes, std::optional<std::size_t>* best_index)
{
  ++nodes;
  const bool maximizing = game.maximizing(state);
  if (depth <= 0 || game.terminal(state)) {
    const double v = game.evaluate(state);
    if (trace) (*trace)({depth, maximizing, via, v, alpha, beta});
    return v;
  }
  const auto moves = game.moves(state);
  if (moves.empty()) {
    const double v = game.evaluate(state);
    if (trace) (*trace)({depth, maximizing, via, v, alpha, beta});
    return v;
  }

  double best = maximizing ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const double v = alpha_beta(game, game.apply(state, moves[i]), depth - 1, alpha, beta, i,
                                trace, nodes, nullptr);
    // Strict comparison keeps the lowest index among equal values.
    if (maximizing ? v > best : v < best) {
      best = v;
      if (best_index) *best_index = i;
    }
    if (maximizing) {
      alpha = std::max(alpha, best);
    } else {
      beta = std::min(beta, best);
    }
    if (alpha >= beta) {
      break;
    }
  }
  if (trace) (*trace)({depth, maximizing, via, best, alpha, beta});
  return best;
}

}  // namespace detail

/// Depth-limited minimax with alpha-beta pruning. The returned value and the
/// tie-broken best root move equal those of unpruned minimax.
template <AdversarialGame G>
SearchResult<typename G::Move> alpha_beta(const G& game, const typename G::State& root,
                                          int depth, const TraceSink* trace = nullptr)
{
  SearchResult<typename G::Move> result;
  std::optional<std::size_t> best_index;
  result.value = detail::alpha_beta(game, root, depth, -std::numeric_limits<double>::infinity(),
                                    std::numeric_limits<double>::infinity(), std::nullopt, trace,
                                    result.nodes, &best_index);
  if (best_index) {
    result.best_index = best_index;
    result.best = game.moves(root)[*best_index];
  }
  return result;
}

struct MctsOptions {
  std::size_t iterations = 200;
  double exploration = 1.414;
  std::size_t max_rollout_plies = 1024;
};

template <class Move>
struct MctsResult {
  std::optional<Move> best;
  std::optional<std::size_t> best_index;
  std::vector<std::size_t> root_visits;
  std::vector<double> root_means;
};

/// UCT search. Unvisited children are expanded in declaration order; rollouts
/// play uniformly random moves until a terminal state and score it.
template <AdversarialGame G>
MctsResult<typename G::Move> mcts(const G& game, const typename G::State& root,
                                  const MctsOptions& options, Rng& rng)
{
  using State = typename G::State;
  using Move = typename G::Move;

  struct Node {
    State state;
    std::size_t parent;
    std::vector<Move> moves;
    std::vector<std::size_t> children;
    std::size_t visits = 0;
    double value_sum = 0.0;
  };
  constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

  std::vector<Node> nodes;
  auto make_node = [&](State s, std::size_t parent) {
    std::vector<Move> moves;
    if (!game.terminal(s)) moves = game.moves(s);
    nodes.push_back(Node{std::move(s), parent, std::move(moves), {}, 0, 0.0});
    return nodes.size() - 1;
  };
  make_node(root, kNoParent);

  for (std::size_t iter = 0; iter < options.iterations; ++iter) {
    std::size_t current = 0;
    while (true) {
      Node& node = nodes[current];
      if (node.moves.empty()) break;
      if (node.children.size() < node.moves.size()) {
        State next = game.apply(node.state, node.moves[node.children.size()]);
        const std::size_t child = make_node(std::move(next), current);
        nodes[current].children.push_back(child);
        current = child;
        break;
      }
      const bool maximizing = game.maximizing(node.state);
      const double log_parent = std::log(static_cast<double>(node.visits));
      double best_score = -std::numeric_limits<double>::infinity();
      std::size_t best_child = node.children.front();
      for (std::size_t child : node.children) {
        const Node& c = nodes[child];
        const double mean = c.value_sum / static_cast<double>(c.visits);
        const double q = maximizing ? mean : -mean;
        const double score =
            q + options.exploration * std::sqrt(log_parent / static_cast<double>(c.visits));
        if (score > best_score) {
          best_score = score;
          best_child = child;
        }
      }
      current = best_child;
    }

    State rollout = nodes[current].state;
    for (std::size_t ply = 0; ply < options.max_rollout_plies && !game.terminal(rollout); ++ply) {
      const auto moves = game.moves(rollout);
      if (moves.empty()) break;
      rollout = game.apply(rollout, moves[uniform_index(rng, moves.size())]);
    }
    const double value = game.evaluate(rollout);

    for (std::size_t n = current; n != kNoParent; n = nodes[n].parent) {
      nodes[n].visits += 1;
      nodes[n].value_sum += value;
    }
  }

  MctsResult<Move> result;
  const Node& root_node = nodes.front();
  std::size_t best_visits = 0;
  for (std::size_t i = 0; i < root_node.children.size(); ++i) {
    const Node& c = nodes[root_node.children[i]];
    result.root_visits.push_back(c.visits);
    result.root_means.push_back(c.visits ? c.value_sum / static_cast<double>(c.visits) : 0.0);
    if (c.visits > best_visits) {
      best_visits = c.visits;
      result.best_index = i;
    }
  }
  if (result.best_index) {
    result.best = root_node.moves[*result.best_index];
  }
  return result;
}

}  // namespace arena::search
