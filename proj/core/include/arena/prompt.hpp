#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace arena {

/// FNV-1a, 64-bit, over the raw bytes of `text`.
constexpr std::uint64_t fnv1a64(std::string_view text) noexcept
{
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (char c : text) {
    hash ^= static_cast<std::uint8_t>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

using SlotValues = std::map<std::string, std::string, std::less<>>;

/// Text with named `{slot}` placeholders. `{{` and `}}` render literal braces.
/// Lines starting with "#" before the first non-comment line form a header
/// (e.g. "# version: 1") and are not part of the body.
class PromptTemplate {
public:
  static PromptTemplate parse(std::string_view text);

  /// Replaces every slot; a slot without a value is invalid-argument.
  std::string render(const SlotValues& values) const;

  const std::vector<std::string>& slots() const { return slots_; }
  int version() const { return version_; }
  const std::string& body() const { return body_; }

private:
  std::string body_;
  std::vector<std::string> slots_;
  int version_ = 0;
};

/// Loads `prompts/<name>.txt` from the embedded resources.
const PromptTemplate& builtin_prompt(std::string_view name);

}  // namespace arena
