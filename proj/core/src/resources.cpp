#include "arena/resources.hpp"

#include "arena/error.hpp"

#include <algorithm>

namespace arena {

std::string_view embedded_resource(std::string_view name)
{
  for (const auto& [key, content] : detail::embedded_table()) {
    if (key == name) {
      return content;
    }
  }
  fail(ErrorCode::NotFound, "no embedded resource named " + std::string(name));
}

std::vector<std::string_view> embedded_resource_names()
{
  std::vector<std::string_view> names;
  for (const auto& entry : detail::embedded_table()) {
    names.push_back(entry.first);
  }
  return names;
}

std::vector<std::string> resource_lines(std::string_view name)
{
  const std::string_view content = embedded_resource(name);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty() && line.front() != '#') {
      lines.emplace_back(line);
    }
    pos = end + 1;
  }
  return lines;
}

const std::vector<TopicEntry>& topic_bank()
{
  static const std::vector<TopicEntry> bank = [] {
    std::vector<TopicEntry> out;
    for (const auto& line : resource_lines("topics.tsv")) {
      const auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      out.push_back({line.substr(0, tab), line.substr(tab + 1)});
    }
    return out;
  }();
  return bank;
}

std::string topic_category(std::string_view topic)
{
  const auto& bank = topic_bank();
  const auto it = std::find_if(bank.begin(), bank.end(),
                               [&](const TopicEntry& e) { return e.text == topic; });
  return it == bank.end() ? "general" : it->category;
}

}  // namespace arena
