#include "arena/error.hpp"
#include "arena/side.hpp"

#include <string>

namespace arena {

std::string_view to_string(ErrorCode code) noexcept
{
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidState: return "invalid-state";
    case ErrorCode::NotFound: return "not-found";
    case ErrorCode::RoundInProgress: return "round-in-progress";
    case ErrorCode::DebateFinished: return "debate-finished";
    case ErrorCode::TurnExpired: return "turn-expired";
    case ErrorCode::Conflict: return "conflict";
    case ErrorCode::StorageError: return "storage-error";
    case ErrorCode::CorruptData: return "corrupt-data";
    case ErrorCode::EvaluationUnavailable: return "evaluation-unavailable";
    case ErrorCode::ProviderUnavailable: return "provider-unavailable";
    case ErrorCode::IoError: return "io-error";
    case ErrorCode::Unauthorized: return "unauthorized";
  }
  return "unknown";
}

std::string_view to_string(Side s) { return s == Side::Ai ? "ai" : "user"; }

Side parse_side(std::string_view text)
{
  if (text == "ai") return Side::Ai;
  if (text == "user") return Side::User;
  fail(ErrorCode::InvalidArgument, "unknown side: " + std::string(text));
}

std::string_view to_string(Position p) { return p == Position::For ? "for" : "against"; }

Position parse_position(std::string_view text)
{
  if (text == "for") return Position::For;
  if (text == "against") return Position::Against;
  fail(ErrorCode::InvalidArgument, "position must be \"for\" or \"against\", got \"" +
                                       std::string(text) + "\"");
}

}  // namespace arena
