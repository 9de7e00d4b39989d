#include "arena/store.hpp"

#include "arena/error.hpp"
#include "arena/prompt.hpp"
#include "arena/serialization.hpp"

#include <fmt/format.h>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace arena {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kPopulationFormat = "arena-population";

bool safe_name(std::string_view name)
{
  return !name.empty() && name.size() <= 128 &&
         std::all_of(name.begin(), name.end(), [](unsigned char c) {
           return std::isalnum(c) != 0 || c == '-' || c == '_';
         });
}

std::string read_file(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::StorageError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_all(int fd, std::string_view data, const fs::path& path)
{
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::StorageError, fmt::format("write to {} failed: {}", path.string(),
                                                std::strerror(errno)));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

class FileDescriptor {
public:
  FileDescriptor(const fs::path& path, int flags) : fd_(::open(path.c_str(), flags, 0644))
  {
    if (fd_ < 0) {
      fail(ErrorCode::StorageError,
           fmt::format("cannot open {}: {}", path.string(), std::strerror(errno)));
    }
  }
  ~FileDescriptor()
  {
    if (fd_ >= 0) ::close(fd_);
  }
  FileDescriptor(const FileDescriptor&) = delete;
  FileDescriptor& operator=(const FileDescriptor&) = delete;

  int get() const { return fd_; }
  /// Exclusive advisory lock, released when the descriptor closes.
  void lock_exclusive(const fs::path& path) const
  {
    while (::flock(fd_, LOCK_EX) != 0) {
      if (errno != EINTR) fail(ErrorCode::StorageError, "cannot lock " + path.string());
    }
  }
  /// Number of newline-terminated lines; a trailing partial line is corrupt.
  std::uint64_t complete_lines(const fs::path& path) const
  {
    std::uint64_t lines = 0;
    char last = '\n';
    char buf[8192];
    off_t offset = 0;
    while (true) {
      const ssize_t n = ::pread(fd_, buf, sizeof buf, offset);
      if (n < 0) {
        if (errno == EINTR) continue;
        fail(ErrorCode::StorageError, "cannot read " + path.string());
      }
      if (n == 0) break;
      lines += static_cast<std::uint64_t>(std::count(buf, buf + n, '\n'));
      last = buf[n - 1];
      offset += n;
    }
    if (last != '\n') {
      throw Error(ErrorCode::CorruptData, "truncated final line in " + path.string(),
                  static_cast<std::size_t>(lines + 1));
    }
    return lines;
  }
  void sync(const fs::path& path) const
  {
    if (::fsync(fd_) != 0) {
      fail(ErrorCode::StorageError, "fsync failed for " + path.string());
    }
  }

private:
  int fd_;
};

json event_to_json(const StoredEvent& e)
{
  return json{{"debate_id", e.debate_id},
              {"sequence", e.sequence},
              {"kind", to_string(e.kind)},
              {"payload", e.payload},
              {"timestamp", e.timestamp}};
}

[[noreturn]] void corrupt(std::size_t line, const std::string& what)
{
  throw Error(ErrorCode::CorruptData, fmt::format("line {}: {}", line, what), line);
}

}  // namespace

std::string_view to_string(EventKind k)
{
  switch (k) {
    case EventKind::Created: return "created";
    case EventKind::UserArgument: return "user_argument";
    case EventKind::AiArgument: return "ai_argument";
    case EventKind::Scores: return "scores";
    case EventKind::RoundAdvanced: return "round_advanced";
    case EventKind::Finished: return "finished";
    case EventKind::Forfeit: return "forfeit";
  }
  return "created";
}

EventKind parse_event_kind(std::string_view text)
{
  for (auto k : {EventKind::Created, EventKind::UserArgument, EventKind::AiArgument,
                 EventKind::Scores, EventKind::RoundAdvanced, EventKind::Finished,
                 EventKind::Forfeit}) {
    if (to_string(k) == text) return k;
  }
  fail(ErrorCode::InvalidArgument, "unknown event kind: " + std::string(text));
}

DebateState fold_events(const std::vector<StoredEvent>& events)
{
  DebateState state;
  bool created = false;
  std::optional<TranscriptEntry> user;
  std::optional<TranscriptEntry> ai;
  std::optional<std::pair<EvaluationScores, EvaluationScores>> scores;
  std::string hint;
  std::optional<Move> prediction;
  bool finished_marker = false;

  for (std::size_t i = 0; i < events.size(); ++i) {
    const StoredEvent& e = events[i];
    const std::size_t line = i + 1;
    if (!created && e.kind != EventKind::Created) corrupt(line, "log must start with created");
    if (created && e.kind == EventKind::Created) corrupt(line, "duplicate created event");
    if (finished_marker || (state.phase == Phase::Finished && e.kind != EventKind::Finished)) {
      corrupt(line, "event after finished");
    }

    try {
      const json& p = e.payload;
      switch (e.kind) {
        case EventKind::Created:
          created = true;
          state.debate_id = e.debate_id;
          state.topic = p.at("topic").get<std::string>();
          state.user_position = parse_position(p.at("user_position").get<std::string>());
          state.ai_position = parse_position(p.at("ai_position").get<std::string>());
          state.rounds_total = p.at("rounds_total").get<std::size_t>();
          state.ga_population_key = p.at("ga_population_key").get<std::string>();
          state.turn_deadline = p.at("turn_deadline").get<Timestamp>();
          state.subject = p.value("subject", std::string());
          state.current_round = 1;
          state.phase = Phase::AwaitingUser;
          break;
        case EventKind::UserArgument:
          user = TranscriptEntry{Side::User, p.at("text").get<std::string>(), {}, false};
          break;
        case EventKind::Forfeit:
          user = TranscriptEntry{Side::User, std::string(), {}, true};
          break;
        case EventKind::AiArgument:
          ai = TranscriptEntry{Side::Ai, p.at("text").get<std::string>(), {}, false};
          hint = p.at("hint").get<std::string>();
          prediction = p.at("predicted_move").get<Move>();
          break;
        case EventKind::Scores:
          scores.emplace(p.at("user").get<EvaluationScores>(), p.at("ai").get<EvaluationScores>());
          break;
        case EventKind::RoundAdvanced: {
          if (!user || !ai || !scores) corrupt(line, "round_advanced before the round is complete");
          if (p.at("round").get<std::size_t>() != state.current_round) {
            corrupt(line, "round_advanced for the wrong round");
          }
          user->scores = user->forfeit ? EvaluationScores{} : scores->first;
          ai->scores = scores->second;
          state.cumulative_user += user->scores.overall;
          state.cumulative_ai += ai->scores.overall;
          state.transcript.push_back(std::move(*user));
          state.transcript.push_back(std::move(*ai));
          state.last_hint = hint;
          state.last_prediction = prediction;
          state.current_round = p.at("next_round").get<std::size_t>();
          state.turn_deadline = p.at("turn_deadline").get<Timestamp>();
          if (state.completed_rounds() == state.rounds_total) state.phase = Phase::Finished;
          user.reset();
          ai.reset();
          scores.reset();
          break;
        }
        case EventKind::Finished:
          if (user || ai || scores) corrupt(line, "finished inside an incomplete round");
          if (state.completed_rounds() != state.rounds_total) corrupt(line, "finished too early");
          state.phase = Phase::Finished;
          finished_marker = true;
          break;
      }
    } catch (const Error& err) {
      if (err.code() == ErrorCode::CorruptData) throw;
      corrupt(line, err.what());
    } catch (const json::exception& err) {
      corrupt(line, err.what());
    }
  }
  if (!created) fail(ErrorCode::NotFound, "empty event log");
  return state;
}

std::uint64_t population_seed(std::uint64_t base_seed, std::string_view key)
{
  return derive_seed(base_seed, fnv1a64(key));
}

FileStore::FileStore(fs::path data_dir, PopulationDefaults defaults)
    : data_dir_(std::move(data_dir)), defaults_(defaults)
{
  std::error_code ec;
  fs::create_directories(data_dir_ / "debates", ec);
  if (!ec) fs::create_directories(data_dir_ / "populations", ec);
  require(!ec, ErrorCode::StorageError,
          fmt::format("cannot create data directory {}: {}", data_dir_.string(), ec.message()));
}

fs::path FileStore::debate_path(std::string_view debate_id) const
{
  return data_dir_ / "debates" / (std::string(debate_id) + ".jsonl");
}

fs::path FileStore::population_path(std::string_view key) const
{
  return data_dir_ / "populations" / (std::string(key) + ".json");
}

bool FileStore::has_debate(std::string_view debate_id) const
{
  return safe_name(debate_id) && fs::exists(debate_path(debate_id));
}

std::vector<std::string> FileStore::debate_ids() const
{
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(data_dir_ / "debates")) {
    if (entry.path().extension() == ".jsonl") ids.push_back(entry.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<StoredEvent> FileStore::read_events(std::string_view debate_id) const
{
  if (!has_debate(debate_id)) {
    fail(ErrorCode::NotFound, "unknown debate " + std::string(debate_id));
  }
  const std::string content = read_file(debate_path(debate_id));
  std::vector<StoredEvent> events;
  std::size_t pos = 0;
  std::size_t line = 0;
  while (pos < content.size()) {
    ++line;
    const auto end = content.find('\n', pos);
    if (end == std::string::npos) corrupt(line, "truncated event line");
    const auto parsed = json::parse(content.begin() + static_cast<std::ptrdiff_t>(pos),
                                    content.begin() + static_cast<std::ptrdiff_t>(end), nullptr,
                                    false);
    pos = end + 1;
    if (parsed.is_discarded() || !parsed.is_object()) corrupt(line, "unparseable event line");
    try {
      StoredEvent e;
      e.debate_id = parsed.at("debate_id").get<std::string>();
      e.sequence = parsed.at("sequence").get<std::uint64_t>();
      e.kind = parse_event_kind(parsed.at("kind").get<std::string>());
      e.payload = parsed.at("payload");
      e.timestamp = parsed.at("timestamp").get<Timestamp>();
      if (e.debate_id != debate_id) corrupt(line, "event belongs to another debate");
      if (e.sequence != line) corrupt(line, "sequence gap");
      events.push_back(std::move(e));
    } catch (const json::exception& err) {
      corrupt(line, err.what());
    } catch (const Error& err) {
      if (err.code() == ErrorCode::CorruptData) throw;
      corrupt(line, err.what());
    }
  }
  return events;
}

std::uint64_t FileStore::last_sequence(std::string_view debate_id)
{
  require(safe_name(debate_id), ErrorCode::InvalidArgument,
          "invalid debate id: " + std::string(debate_id));
  const fs::path path = debate_path(debate_id);
  if (!fs::exists(path)) return 0;
  FileDescriptor fd(path, O_RDONLY | O_CLOEXEC);
  return fd.complete_lines(path);
}

std::uint64_t FileStore::append_event(const StoredEvent& event)
{
  return append_events({event});
}

std::uint64_t FileStore::append_events(const std::vector<StoredEvent>& events)
{
  require(!events.empty(), ErrorCode::InvalidArgument, "nothing to append");
  const std::string& id = events.front().debate_id;
  require(safe_name(id), ErrorCode::InvalidArgument, "invalid debate id: " + id);

  std::lock_guard lock(mutex_);
  const fs::path path = debate_path(id);
  FileDescriptor fd(path, O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC);
  // The file lock serializes writers from other store instances and processes.
  fd.lock_exclusive(path);
  std::uint64_t expected = fd.complete_lines(path) + 1;

  std::string data;
  for (const auto& e : events) {
    require(e.debate_id == id, ErrorCode::InvalidArgument, "batch spans several debates");
    if (e.sequence != expected) {
      fail(ErrorCode::Conflict, fmt::format("sequence {} conflicts; next is {}", e.sequence,
                                            expected));
    }
    ++expected;
    data += event_to_json(e).dump();
    data.push_back('\n');
  }

  write_all(fd.get(), data, path);
  fd.sync(path);
  return expected - 1;
}

DebateState FileStore::load_debate(std::string_view debate_id) const
{
  return fold_events(read_events(debate_id));
}

void FileStore::save_population(std::string_view key, const Population& population)
{
  require(safe_name(key), ErrorCode::InvalidArgument, "invalid population key: " + std::string(key));
  require(!population.members.empty() &&
              std::all_of(population.members.begin(), population.members.end(),
                          [](const Strategy& s) { return is_valid(s); }),
          ErrorCode::InvalidArgument, "population has invalid members");

  json doc = population;
  doc["format"] = kPopulationFormat;
  doc["version"] = kPopulationFormatVersion;
  const std::string data = doc.dump(2) + "\n";

  std::lock_guard lock(mutex_);
  const fs::path path = population_path(key);
  const fs::path tmp = path.string() + ".tmp";
  {
    FileDescriptor fd(tmp, O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC);
    write_all(fd.get(), data, tmp);
    fd.sync(tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  require(!ec, ErrorCode::StorageError, "cannot replace " + path.string() + ": " + ec.message());
}

bool FileStore::has_population(std::string_view key) const
{
  require(safe_name(key), ErrorCode::InvalidArgument, "invalid population key: " + std::string(key));
  std::lock_guard lock(mutex_);
  return fs::exists(population_path(key));
}

Population FileStore::load_population(std::string_view key) const
{
  require(safe_name(key), ErrorCode::InvalidArgument, "invalid population key: " + std::string(key));
  const fs::path path = population_path(key);
  std::string content;
  {
    std::lock_guard lock(mutex_);
    if (!fs::exists(path)) {
      return init_population(defaults_.size, population_seed(defaults_.base_seed, key));
    }
    content = read_file(path);
  }
  const auto doc = json::parse(content, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    fail(ErrorCode::CorruptData, "population file is not JSON: " + path.string());
  }
  if (doc.value("format", std::string()) != kPopulationFormat ||
      doc.value("version", -1) != kPopulationFormatVersion) {
    fail(ErrorCode::CorruptData, "population file has an unsupported version header");
  }
  Population population;
  try {
    population = doc.get<Population>();
  } catch (const json::exception& err) {
    fail(ErrorCode::CorruptData, std::string("malformed population: ") + err.what());
  }
  if (population.members.empty() ||
      !std::all_of(population.members.begin(), population.members.end(),
                   [](const Strategy& s) { return is_valid(s); })) {
    fail(ErrorCode::CorruptData, "population has invalid members");
  }
  return population;
}

fs::path resolve_data_dir(const std::optional<std::string>& explicit_dir)
{
  if (explicit_dir && !explicit_dir->empty()) return *explicit_dir;
  if (const char* env = std::getenv("DEBATE_ARENA_DATA"); env && *env) return env;
  return "arena-data";
}

}  // namespace arena
