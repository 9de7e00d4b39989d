#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace arena {

enum class ErrorCode {
  InvalidArgument,
  InvalidState,
  NotFound,
  RoundInProgress,
  DebateFinished,
  TurnExpired,
  Conflict,
  StorageError,
  CorruptData,
  EvaluationUnavailable,
  ProviderUnavailable,
  IoError,
  Unauthorized,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure the library reports is an Error carrying a machine code.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  /// Corrupt-data errors carry the 1-based line at which parsing failed.
  Error(ErrorCode code, const std::string& message, std::size_t line)
      : std::runtime_error(message), code_(code), line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message)
{
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message)
{
  if (!condition) {
    throw Error(code, message);
  }
}

}  // namespace arena
