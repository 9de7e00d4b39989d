#pragma once

#include "arena/side.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace arena {

class Gateway;
struct DebateState;

struct EvaluationScores {
  int relevance = 0;
  int persuasiveness = 0;
  int logical_consistency = 0;
  int evidence_usage = 0;
  double overall = 0.0;

  std::array<int, 4> dimensions() const
  {
    return {relevance, persuasiveness, logical_consistency, evidence_usage};
  }
  bool operator==(const EvaluationScores&) const = default;
};

inline constexpr std::array<std::string_view, 4> kDimensionNames{
    "Relevance", "Persuasiveness", "Logical Consistency", "Evidence Usage"};

struct RubricWeights {
  double relevance = 0.30;
  double persuasiveness = 0.30;
  double logical_consistency = 0.25;
  double evidence_usage = 0.15;

  std::array<double, 4> values() const
  {
    return {relevance, persuasiveness, logical_consistency, evidence_usage};
  }
  void validate() const;
};

enum class FallacyKind { Bandwagon, AdHominem, FalseDilemma, HastyGeneralization, AppealToFear };

std::string_view to_string(FallacyKind k);
FallacyKind parse_fallacy_kind(std::string_view text);

struct FallacyFlag {
  FallacyKind kind = FallacyKind::Bandwagon;
  std::size_t begin = 0;  // byte offsets, half-open
  std::size_t end = 0;

  bool operator==(const FallacyFlag&) const = default;
};

/// Phrase lexicon. A phrase may contain "..." to match any run of text that
/// stays within one sentence, e.g. "either we ... or".
class FallacyLexicon {
public:
  struct Entry {
    std::vector<std::string> parts;  // lower-cased literal pieces
    FallacyKind kind;
  };

  /// Parses `phrase<TAB>kind` lines; blank lines and '#' comments are skipped.
  static FallacyLexicon parse(std::string_view text);
  static FallacyLexicon load_file(const std::string& path);
  /// The lexicon shipped with the library.
  static const FallacyLexicon& builtin();

  const std::vector<Entry>& entries() const { return entries_; }

private:
  std::vector<Entry> entries_;
};

double combine_scores(std::array<int, 4> dims, const RubricWeights& weights);

EvaluationScores make_scores(std::array<int, 4> dims, const RubricWeights& weights);

EvaluationScores score_argument(std::string_view argument, const DebateState& context, Side side,
                                const RubricWeights& weights, Gateway& gateway,
                                bool* degraded = nullptr);

std::vector<FallacyFlag> flag_fallacies(std::string_view argument,
                                        const FallacyLexicon& lexicon = FallacyLexicon::builtin());

/// Dimensions below this score get an improvement suggestion.
inline constexpr int kSuggestionThreshold = 7;

std::string render_feedback_template(const EvaluationScores& scores,
                                     const std::vector<FallacyFlag>& flags,
                                     std::string_view argument);

std::string build_feedback(const EvaluationScores& scores, const std::vector<FallacyFlag>& flags,
                           std::string_view argument, Gateway& gateway,
                           bool* degraded = nullptr);

}  // namespace arena
