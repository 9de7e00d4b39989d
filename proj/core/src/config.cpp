#include "arena/config.hpp"

#include "arena/error.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace arena {

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& obj, const char* name, T& out)
{
  const auto it = obj.find(name);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::InvalidArgument, std::string("config field '") + name + "' has the wrong type");
  }
}

const json& section(const json& doc, const char* name)
{
  static const json empty = json::object();
  const auto it = doc.find(name);
  if (it == doc.end()) return empty;
  require(it->is_object(), ErrorCode::InvalidArgument,
          std::string("config section '") + name + "' must be an object");
  return *it;
}

ProviderEntry parse_entry(const json& obj)
{
  require(obj.is_object(), ErrorCode::InvalidArgument, "provider entry must be an object");
  ProviderEntry e;
  std::string kind = "stub";
  read_field(obj, "kind", kind);
  if (kind == "stub") {
    e.kind = ProviderKind::Stub;
  } else if (kind == "http") {
    e.kind = ProviderKind::Http;
  } else {
    fail(ErrorCode::InvalidArgument, "provider kind must be 'stub' or 'http'");
  }
  read_field(obj, "endpoint", e.endpoint);
  read_field(obj, "model", e.model);
  read_field(obj, "token_env", e.token_env);
  read_field(obj, "timeout_ms", e.timeout_ms);
  read_field(obj, "max_tokens", e.max_tokens);
  read_field(obj, "temperature", e.temperature);
  require(e.timeout_ms > 0, ErrorCode::InvalidArgument, "timeout_ms must be positive");
  return e;
}

void parse_ga(const json& obj, GaConfig& ga)
{
  read_field(obj, "population_size", ga.population_size);
  read_field(obj, "tournament_size", ga.tournament_size);
  read_field(obj, "mutation_rate", ga.mutation_rate);
  read_field(obj, "mutation_magnitude", ga.mutation_magnitude);
  read_field(obj, "elite_count", ga.elite_count);
  std::string text;
  if (obj.contains("selection_method")) {
    read_field(obj, "selection_method", text);
    ga.selection_method = parse_selection_method(text);
  }
  if (obj.contains("crossover_method")) {
    read_field(obj, "crossover_method", text);
    ga.crossover_method = parse_crossover_method(text);
  }
  ga.validate();
}

void parse_search(const json& obj, SearchConfig& s)
{
  read_field(obj, "depth", s.depth);
  read_field(obj, "branching", s.branching);
  read_field(obj, "mcts_iterations", s.mcts_iterations);
  read_field(obj, "exploration_constant", s.exploration_constant);
  read_field(obj, "time_budget_ms", s.time_budget_ms);
  if (obj.contains("algorithm")) {
    std::string text;
    read_field(obj, "algorithm", text);
    if (text == "minimax") {
      s.algorithm = SearchAlgorithm::Minimax;
    } else if (text == "mcts") {
      s.algorithm = SearchAlgorithm::Mcts;
    } else {
      fail(ErrorCode::InvalidArgument, "search algorithm must be 'minimax' or 'mcts'");
    }
  }
  s.validate();
}

}  // namespace

AppConfig parse_config(const json& doc)
{
  require(doc.is_object(), ErrorCode::InvalidArgument, "config must be a JSON object");
  AppConfig cfg;

  const json& providers = section(doc, "providers");
  if (!providers.empty()) {
    ProviderConfig pc;
    for (const auto& [name, entry] : providers.items()) {
      pc.entries[parse_role(name)] = parse_entry(entry);
    }
    pc.validate();
    cfg.providers = std::move(pc);
  }

  const json& engine = section(doc, "engine");
  EngineConfig& ec = cfg.engine;
  read_field(engine, "default_rounds", ec.default_rounds);
  read_field(engine, "min_rounds", ec.min_rounds);
  read_field(engine, "max_rounds", ec.max_rounds);
  read_field(engine, "turn_limit_ms", ec.turn_limit_ms);
  read_field(engine, "max_argument_chars", ec.max_argument_chars);
  read_field(engine, "seed", ec.seed);
  require(ec.turn_limit_ms > 0, ErrorCode::InvalidArgument, "turn_limit_ms must be positive");
  require(ec.max_argument_chars > 0, ErrorCode::InvalidArgument,
          "max_argument_chars must be positive");
  require(ec.min_rounds >= 1 && ec.min_rounds <= ec.default_rounds &&
              ec.default_rounds <= ec.max_rounds,
          ErrorCode::InvalidArgument, "rounds must satisfy 1 <= min <= default <= max");
  parse_ga(section(doc, "ga"), ec.ga);
  parse_search(section(doc, "search"), ec.search);

  const json& rubric = section(doc, "rubric");
  read_field(rubric, "relevance", ec.weights.relevance);
  read_field(rubric, "persuasiveness", ec.weights.persuasiveness);
  read_field(rubric, "logical_consistency", ec.weights.logical_consistency);
  read_field(rubric, "evidence_usage", ec.weights.evidence_usage);
  ec.weights.validate();

  std::string path;
  if (rubric.contains("fallacy_lexicon")) {
    read_field(rubric, "fallacy_lexicon", path);
    cfg.fallacy_lexicon = path;
  }

  const json& server = section(doc, "server");
  read_field(server, "auth_enabled", cfg.auth_enabled);
  read_field(server, "port", cfg.port);
  require(cfg.port >= 0 && cfg.port <= 65535, ErrorCode::InvalidArgument, "port out of range");

  const json& storage = section(doc, "storage");
  if (storage.contains("data_dir")) {
    read_field(storage, "data_dir", path);
    cfg.data_dir = path;
  }
  return cfg;
}

AppConfig load_config_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  require(in.good(), ErrorCode::IoError, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::InvalidArgument, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  AppConfig cfg = parse_config(doc);
  if (cfg.fallacy_lexicon) {
    std::filesystem::path lex(*cfg.fallacy_lexicon);
    if (lex.is_relative()) lex = path.parent_path() / lex;
    cfg.fallacy_lexicon = lex.string();
  }
  return cfg;
}

std::optional<std::filesystem::path> resolve_config_path(
    const std::optional<std::string>& explicit_path)
{
  if (explicit_path && !explicit_path->empty()) return std::filesystem::path(*explicit_path);
  if (const char* env = std::getenv("DEBATE_ARENA_CONFIG"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

AppConfig load_app_config(const std::optional<std::string>& explicit_path)
{
  AppConfig cfg;
  if (const auto path = resolve_config_path(explicit_path)) cfg = load_config_file(*path);
  if (cfg.fallacy_lexicon) {
    cfg.engine.lexicon =
        std::make_shared<const FallacyLexicon>(FallacyLexicon::load_file(*cfg.fallacy_lexicon));
  }
  return cfg;
}

}  // namespace arena
