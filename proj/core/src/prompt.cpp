#include "arena/prompt.hpp"

#include "arena/error.hpp"
#include "arena/resources.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <memory>
#include <mutex>

namespace arena {

namespace {

bool is_slot_char(char c)
{
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

}  // namespace

PromptTemplate PromptTemplate::parse(std::string_view text)
{
  PromptTemplate tmpl;

  // Leading "# key: value" header lines.
  while (!text.empty() && text.front() == '#') {
    const auto end = text.find('\n');
    const std::string_view line = text.substr(0, end);
    constexpr std::string_view kVersion = "# version:";
    if (line.substr(0, kVersion.size()) == kVersion) {
      std::string_view value = line.substr(kVersion.size());
      while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
      std::from_chars(value.data(), value.data() + value.size(), tmpl.version_);
    }
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
  }
  if (!text.empty() && text.back() == '\n') {
    text.remove_suffix(1);
  }
  tmpl.body_ = std::string(text);

  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '{') {
      if (i + 1 < text.size() && text[i + 1] == '{') {
        ++i;
        continue;
      }
      const auto close = text.find('}', i);
      require(close != std::string_view::npos, ErrorCode::InvalidArgument,
              "unterminated slot in prompt template");
      const std::string_view name = text.substr(i + 1, close - i - 1);
      require(!name.empty() && std::all_of(name.begin(), name.end(), is_slot_char),
              ErrorCode::InvalidArgument, "malformed slot name in prompt template");
      if (std::find(tmpl.slots_.begin(), tmpl.slots_.end(), name) == tmpl.slots_.end()) {
        tmpl.slots_.emplace_back(name);
      }
      i = close;
    } else if (text[i] == '}' && i + 1 < text.size() && text[i + 1] == '}') {
      ++i;
    }
  }
  return tmpl;
}

std::string PromptTemplate::render(const SlotValues& values) const
{
  std::string out;
  out.reserve(body_.size() + 64);
  const std::string_view text = body_;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '{' && i + 1 < text.size() && text[i + 1] == '{') {
      out.push_back('{');
      ++i;
    } else if (c == '}' && i + 1 < text.size() && text[i + 1] == '}') {
      out.push_back('}');
      ++i;
    } else if (c == '{') {
      const auto close = text.find('}', i);
      const std::string_view name = text.substr(i + 1, close - i - 1);
      const auto it = values.find(name);
      require(it != values.end(), ErrorCode::InvalidArgument,
              "no value for prompt slot {" + std::string(name) + "}");
      out += it->second;
      i = close;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

const PromptTemplate& builtin_prompt(std::string_view name)
{
  static std::mutex mutex;
  static std::map<std::string, std::unique_ptr<PromptTemplate>, std::less<>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(name);
  if (it == cache.end()) {
    const std::string path = "prompts/" + std::string(name) + ".txt";
    auto tmpl = std::make_unique<PromptTemplate>(PromptTemplate::parse(embedded_resource(path)));
    it = cache.emplace(std::string(name), std::move(tmpl)).first;
  }
  return *it->second;
}

}  // namespace arena
