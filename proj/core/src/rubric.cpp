#include "arena/rubric.hpp"

#include "arena/debate_state.hpp"
#include "arena/error.hpp"
#include "arena/gateway.hpp"
#include "arena/resources.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace arena {

namespace {

constexpr std::array<std::string_view, 4> kImprovements{
    "Tie each point directly to the motion and answer your opponent's last argument.",
    "Make the impact concrete: say who is affected, how much, and why it matters.",
    "Check that each step follows from the last and avoid sweeping generalizations.",
    "Back your main claim with a specific statistic, study, example or named source.",
};

std::string lower_ascii(std::string_view text)
{
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

bool at_boundaries(std::string_view text, std::size_t begin, std::size_t end)
{
  const bool left = begin == 0 || !word_char(text[begin - 1]) || !word_char(text[begin]);
  const bool right = end >= text.size() || !word_char(text[end]) || !word_char(text[end - 1]);
  return left && right;
}

/// First occurrence of `part` at word boundaries in [from, limit).
std::size_t find_word(std::string_view text, std::string_view part, std::size_t from,
                      std::size_t limit)
{
  for (auto pos = text.find(part, from); pos != std::string_view::npos && pos + part.size() <= limit;
       pos = text.find(part, pos + 1)) {
    if (at_boundaries(text, pos, pos + part.size())) return pos;
  }
  return std::string_view::npos;
}

std::size_t sentence_end(std::string_view text, std::size_t from)
{
  const auto pos = text.find_first_of(".!?\n", from);
  return pos == std::string_view::npos ? text.size() : pos;
}

}  // namespace

void RubricWeights::validate() const
{
  const auto w = values();
  for (double v : w) {
    require(std::isfinite(v) && v >= 0.0, ErrorCode::InvalidArgument,
            "rubric weights must be non-negative");
  }
  require(std::abs(w[0] + w[1] + w[2] + w[3] - 1.0) <= 1e-9, ErrorCode::InvalidArgument,
          "rubric weights must sum to 1");
}

std::string_view to_string(FallacyKind k)
{
  switch (k) {
    case FallacyKind::Bandwagon: return "bandwagon";
    case FallacyKind::AdHominem: return "ad-hominem";
    case FallacyKind::FalseDilemma: return "false-dilemma";
    case FallacyKind::HastyGeneralization: return "hasty-generalization";
    case FallacyKind::AppealToFear: return "appeal-to-fear";
  }
  return "bandwagon";
}

FallacyKind parse_fallacy_kind(std::string_view text)
{
  for (auto k : {FallacyKind::Bandwagon, FallacyKind::AdHominem, FallacyKind::FalseDilemma,
                 FallacyKind::HastyGeneralization, FallacyKind::AppealToFear}) {
    if (to_string(k) == text) return k;
  }
  fail(ErrorCode::InvalidArgument, "unknown fallacy kind: " + std::string(text));
}

FallacyLexicon FallacyLexicon::parse(std::string_view text)
{
  FallacyLexicon lexicon;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    ++line_no;
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;

    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::CorruptData,
                  fmt::format("lexicon line {}: expected phrase<TAB>kind", line_no), line_no);
    }
    Entry entry{{}, FallacyKind::Bandwagon};
    try {
      entry.kind = parse_fallacy_kind(trim(line.substr(tab + 1)));
    } catch (const Error&) {
      throw Error(ErrorCode::CorruptData, fmt::format("lexicon line {}: unknown kind", line_no),
                  line_no);
    }
    std::string_view phrase = line.substr(0, tab);
    while (true) {
      const auto gap = phrase.find("...");
      const auto piece = trim(phrase.substr(0, gap));
      if (!piece.empty()) entry.parts.push_back(lower_ascii(piece));
      if (gap == std::string_view::npos) break;
      phrase.remove_prefix(gap + 3);
    }
    if (entry.parts.empty()) {
      throw Error(ErrorCode::CorruptData, fmt::format("lexicon line {}: empty phrase", line_no),
                  line_no);
    }
    lexicon.entries_.push_back(std::move(entry));
  }
  return lexicon;
}

FallacyLexicon FallacyLexicon::load_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot read fallacy lexicon " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

const FallacyLexicon& FallacyLexicon::builtin()
{
  static const FallacyLexicon lexicon = parse(embedded_resource("fallacy_lexicon.tsv"));
  return lexicon;
}

double combine_scores(std::array<int, 4> dims, const RubricWeights& weights)
{
  weights.validate();
  const auto w = weights.values();
  double total = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    total += w[i] * static_cast<double>(dims[i]);
  }
  return round2(total);
}

EvaluationScores make_scores(std::array<int, 4> dims, const RubricWeights& weights)
{
  for (auto& d : dims) d = std::clamp(d, 0, 10);
  EvaluationScores scores;
  scores.relevance = dims[0];
  scores.persuasiveness = dims[1];
  scores.logical_consistency = dims[2];
  scores.evidence_usage = dims[3];
  scores.overall = combine_scores(dims, weights);
  return scores;
}

EvaluationScores score_argument(std::string_view argument, const DebateState& context, Side side,
                                const RubricWeights& weights, Gateway& gateway, bool* degraded)
{
  require(!trim(argument).empty(), ErrorCode::InvalidArgument, "argument must not be empty");
  weights.validate();
  try {
    return make_scores(gateway.raw_evaluate(argument, context, side, degraded), weights);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ProviderUnavailable) {
      fail(ErrorCode::EvaluationUnavailable, e.what());
    }
    throw;
  }
}

std::vector<FallacyFlag> flag_fallacies(std::string_view argument, const FallacyLexicon& lexicon)
{
  require(!trim(argument).empty(), ErrorCode::InvalidArgument, "argument must not be empty");
  const std::string text = lower_ascii(argument);
  const std::string_view view = text;

  std::vector<FallacyFlag> flags;
  for (const auto& entry : lexicon.entries()) {
    std::size_t from = 0;
    while (true) {
      const std::size_t begin = find_word(view, entry.parts.front(), from, view.size());
      if (begin == std::string_view::npos) break;
      std::size_t end = begin + entry.parts.front().size();
      const std::size_t limit = sentence_end(view, begin);
      bool matched = true;
      for (std::size_t i = 1; i < entry.parts.size(); ++i) {
        const std::size_t next = find_word(view, entry.parts[i], end, limit);
        if (next == std::string_view::npos) {
          matched = false;
          break;
        }
        end = next + entry.parts[i].size();
      }
      if (matched) {
        flags.push_back({entry.kind, begin, end});
        from = end;
      } else {
        from = begin + 1;
      }
    }
  }
  std::stable_sort(flags.begin(), flags.end(),
                   [](const FallacyFlag& a, const FallacyFlag& b) { return a.begin < b.begin; });
  return flags;
}

std::string render_feedback_template(const EvaluationScores& scores,
                                     const std::vector<FallacyFlag>& flags,
                                     std::string_view argument)
{
  const auto dims = scores.dimensions();
  std::string out;
  for (std::size_t i = 0; i < 4; ++i) {
    out += fmt::format("{}: {}/10\n", kDimensionNames[i], dims[i]);
  }
  out += fmt::format("Overall: {:.2f}/10\n", scores.overall);

  bool any = false;
  for (std::size_t i = 0; i < 4; ++i) {
    if (dims[i] < kSuggestionThreshold) {
      if (!any) out += "Suggestions:\n";
      any = true;
      out += fmt::format("- Improve {}: {}\n", kDimensionNames[i], kImprovements[i]);
    }
  }
  if (!any) {
    out += "Suggestions: none, every dimension scored 7 or higher.\n";
  }
  if (!flags.empty()) {
    out += "Possible fallacies:\n";
    for (const auto& f : flags) {
      const auto quote = f.end <= argument.size() ? argument.substr(f.begin, f.end - f.begin)
                                                  : std::string_view{};
      out += fmt::format("- {}: \"{}\"\n", to_string(f.kind), quote);
    }
  }
  return out;
}

std::string build_feedback(const EvaluationScores& scores, const std::vector<FallacyFlag>& flags,
                           std::string_view argument, Gateway& gateway, bool* degraded)
{
  std::string feedback = render_feedback_template(scores, flags, argument);
  if (!gateway.is_live(ProviderRole::Assistant)) {
    return feedback;
  }
  SlotValues slots{{"feedback", feedback}};
  const std::string prompt = builtin_prompt("feedback").render(slots);
  const Completion completion =
      gateway.complete(gateway.make_request(ProviderRole::Assistant, prompt, std::move(slots)));
  if (completion.degraded || trim(completion.text).empty()) {
    if (degraded && completion.degraded) *degraded = true;
    return feedback;
  }
  return completion.text;
}

}  // namespace arena
