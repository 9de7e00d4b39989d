#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arena {

/// Contents of a data file compiled into the library (path relative to the
/// data directory, e.g. "topics.tsv"). Unknown names are not-found.
std::string_view embedded_resource(std::string_view name);

std::vector<std::string_view> embedded_resource_names();

struct TopicEntry {
  std::string category;
  std::string text;
};

/// The shipped topic bank.
const std::vector<TopicEntry>& topic_bank();

/// Category of a bank topic, or "general" for topics outside the bank.
std::string topic_category(std::string_view topic);

/// Non-empty, non-comment lines of an embedded text file.
std::vector<std::string> resource_lines(std::string_view name);

namespace detail {
std::span<const std::pair<std::string_view, std::string_view>> embedded_table();
}

}  // namespace arena
