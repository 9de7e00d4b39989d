#pragma once

#include "arena/engine.hpp"
#include "arena/gateway.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace arena {

struct AppConfig {
  ProviderConfig providers = ProviderConfig::all_stub();
  EngineConfig engine;
  std::optional<std::string> data_dir;
  std::optional<std::string> fallacy_lexicon;  // path overriding the shipped lexicon
  bool auth_enabled = false;
  int port = 8080;
};

/// Missing sections keep their defaults; a "providers" section must name all
/// four roles. Malformed values are invalid-argument.
AppConfig parse_config(const nlohmann::json& doc);

AppConfig load_config_file(const std::filesystem::path& path);

/// Config path: the explicit value when given, else DEBATE_ARENA_CONFIG when set.
std::optional<std::filesystem::path> resolve_config_path(const std::optional<std::string>& explicit_path);

/// Loads the resolved config file, or defaults when there is none.
AppConfig load_app_config(const std::optional<std::string>& explicit_path);

}  // namespace arena
