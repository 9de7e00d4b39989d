#pragma once

// JSON mappings for the wire and file formats.

#include "arena/debate_state.hpp"
#include "arena/predictor.hpp"
#include "arena/rubric.hpp"
#include "arena/strategy.hpp"

#include <nlohmann/json.hpp>

namespace arena {

void to_json(nlohmann::json& j, const Strategy& s);
void from_json(const nlohmann::json& j, Strategy& s);

/// {generation, seed, members: [{ethos, pathos, logos}]}
void to_json(nlohmann::json& j, const Population& p);
void from_json(const nlohmann::json& j, Population& p);

void to_json(nlohmann::json& j, const Move& m);
void from_json(const nlohmann::json& j, Move& m);

void to_json(nlohmann::json& j, const EvaluationScores& s);
void from_json(const nlohmann::json& j, EvaluationScores& s);

void to_json(nlohmann::json& j, const FallacyFlag& f);

void to_json(nlohmann::json& j, const TranscriptEntry& e);
void from_json(const nlohmann::json& j, TranscriptEntry& e);

void to_json(nlohmann::json& j, const DebateState& d);
void from_json(const nlohmann::json& j, DebateState& d);

void to_json(nlohmann::json& j, const RoundResult& r);
void from_json(const nlohmann::json& j, RoundResult& r);

void to_json(nlohmann::json& j, const DebateResult& r);
void from_json(const nlohmann::json& j, DebateResult& r);

}  // namespace arena
