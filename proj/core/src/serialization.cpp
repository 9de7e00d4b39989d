#include "arena/serialization.hpp"

#include "arena/error.hpp"

namespace arena {

using nlohmann::json;

void to_json(json& j, const Strategy& s)
{
  j = json{{"ethos", s.ethos}, {"pathos", s.pathos}, {"logos", s.logos}};
}

void from_json(const json& j, Strategy& s)
{
  s.ethos = j.at("ethos").get<double>();
  s.pathos = j.at("pathos").get<double>();
  s.logos = j.at("logos").get<double>();
}

void to_json(json& j, const Population& p)
{
  j = json{{"generation", p.generation}, {"seed", p.seed}, {"members", p.members}};
}

void from_json(const json& j, Population& p)
{
  p.generation = j.at("generation").get<std::uint64_t>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.members = j.at("members").get<std::vector<Strategy>>();
}

void to_json(json& j, const Move& m)
{
  j = json{{"tactic", to_string(m.tactic)}, {"strength", m.strength_estimate}};
}

void from_json(const json& j, Move& m)
{
  m.tactic = parse_tactic(j.at("tactic").get<std::string>());
  m.strength_estimate = j.at("strength").get<double>();
}

void to_json(json& j, const EvaluationScores& s)
{
  j = json{{"relevance", s.relevance},
           {"persuasiveness", s.persuasiveness},
           {"logical_consistency", s.logical_consistency},
           {"evidence_usage", s.evidence_usage},
           {"overall", s.overall}};
}

void from_json(const json& j, EvaluationScores& s)
{
  s.relevance = j.at("relevance").get<int>();
  s.persuasiveness = j.at("persuasiveness").get<int>();
  s.logical_consistency = j.at("logical_consistency").get<int>();
  s.evidence_usage = j.at("evidence_usage").get<int>();
  s.overall = j.at("overall").get<double>();
}

void to_json(json& j, const FallacyFlag& f)
{
  j = json{{"kind", to_string(f.kind)}, {"begin", f.begin}, {"end", f.end}};
}

void to_json(json& j, const TranscriptEntry& e)
{
  j = json{{"side", to_string(e.side)},
           {"text", e.text},
           {"scores", e.scores},
           {"forfeit", e.forfeit}};
}

void from_json(const json& j, TranscriptEntry& e)
{
  e.side = parse_side(j.at("side").get<std::string>());
  e.text = j.at("text").get<std::string>();
  e.scores = j.at("scores").get<EvaluationScores>();
  e.forfeit = j.value("forfeit", false);
}

void to_json(json& j, const DebateState& d)
{
  j = json{{"debate_id", d.debate_id},
           {"topic", d.topic},
           {"user_position", to_string(d.user_position)},
           {"ai_position", to_string(d.ai_position)},
           {"rounds_total", d.rounds_total},
           {"current_round", d.current_round},
           {"transcript", d.transcript},
           {"cumulative_user", d.cumulative_user},
           {"cumulative_ai", d.cumulative_ai},
           {"phase", to_string(d.phase)},
           {"turn_deadline", d.turn_deadline},
           {"ga_population_key", d.ga_population_key},
           {"last_hint", d.last_hint},
           {"last_prediction", d.last_prediction ? json(*d.last_prediction) : json(nullptr)},
           {"subject", d.subject}};
}

void from_json(const json& j, DebateState& d)
{
  d.debate_id = j.at("debate_id").get<std::string>();
  d.topic = j.at("topic").get<std::string>();
  d.user_position = parse_position(j.at("user_position").get<std::string>());
  d.ai_position = parse_position(j.at("ai_position").get<std::string>());
  d.rounds_total = j.at("rounds_total").get<std::size_t>();
  d.current_round = j.at("current_round").get<std::size_t>();
  d.transcript = j.at("transcript").get<std::vector<TranscriptEntry>>();
  d.cumulative_user = j.at("cumulative_user").get<double>();
  d.cumulative_ai = j.at("cumulative_ai").get<double>();
  d.phase = parse_phase(j.at("phase").get<std::string>());
  d.turn_deadline = j.at("turn_deadline").get<Timestamp>();
  d.ga_population_key = j.at("ga_population_key").get<std::string>();
  d.last_hint = j.at("last_hint").get<std::string>();
  const auto& prediction = j.at("last_prediction");
  d.last_prediction =
      prediction.is_null() ? std::nullopt : std::optional<Move>(prediction.get<Move>());
  d.subject = j.value("subject", std::string());
}

void to_json(json& j, const RoundResult& r)
{
  j = json{{"ai_response", r.ai_response},
           {"user_scores", r.user_scores},
           {"ai_scores", r.ai_scores},
           {"feedback", r.feedback},
           {"suggestions", r.suggestions},
           {"strategy_hint", r.strategy_hint},
           {"predicted_move", r.predicted_move},
           {"round", r.round},
           {"debate_over", r.debate_over},
           {"degraded", r.degraded}};
}

void from_json(const json& j, RoundResult& r)
{
  r.ai_response = j.at("ai_response").get<std::string>();
  r.user_scores = j.at("user_scores").get<EvaluationScores>();
  r.ai_scores = j.at("ai_scores").get<EvaluationScores>();
  r.feedback = j.at("feedback").get<std::string>();
  r.suggestions = j.at("suggestions").get<std::vector<std::string>>();
  r.strategy_hint = j.at("strategy_hint").get<std::string>();
  r.predicted_move = j.at("predicted_move").get<Move>();
  r.round = j.at("round").get<std::size_t>();
  r.debate_over = j.at("debate_over").get<bool>();
  r.degraded = j.at("degraded").get<bool>();
}

void to_json(json& j, const DebateResult& r)
{
  json rounds = json::array();
  for (const auto& [user, ai] : r.per_round) {
    rounds.push_back(json{{"user", user}, {"ai", ai}});
  }
  j = json{{"winner", to_string(r.winner)},
           {"avg_user", r.avg_user},
           {"avg_ai", r.avg_ai},
           {"per_round", rounds}};
}

void from_json(const json& j, DebateResult& r)
{
  r.winner = parse_winner(j.at("winner").get<std::string>());
  r.avg_user = j.at("avg_user").get<double>();
  r.avg_ai = j.at("avg_ai").get<double>();
  r.per_round.clear();
  for (const auto& round : j.at("per_round")) {
    r.per_round.emplace_back(round.at("user").get<double>(), round.at("ai").get<double>());
  }
}

}  // namespace arena
