#include "arena/engine.hpp"
#include "arena/error.hpp"
#include "arena/serialization.hpp"
#include "arena/store.hpp"

#include "support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <thread>

using namespace arena;

namespace {

ErrorCode code_of(auto&& fn)
{
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidState;
}

StoredEvent created(const std::string& id, std::uint64_t seq = 1)
{
  StoredEvent e;
  e.debate_id = id;
  e.sequence = seq;
  e.kind = EventKind::Created;
  e.payload = {{"topic", "Topic"},
               {"user_position", "for"},
               {"ai_position", "against"},
               {"rounds_total", 3},
               {"ga_population_key", "general"},
               {"turn_deadline", 5000},
               {"subject", "anonymous"}};
  return e;
}

std::vector<std::string> read_lines(const std::filesystem::path& p)
{
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

/// Plays a stub debate through an engine backed by `store`.
std::string play(const std::shared_ptr<FileStore>& store, std::size_t rounds, std::size_t submit)
{
  test::FakeClock clock;
  Engine engine({}, test::stub_gateway(), store, clock.clock());
  const auto d = engine.create_debate("Zoos do more harm than good", "for", rounds);
  for (std::size_t i = 0; i < submit; ++i) {
    engine.submit_argument(d.debate_id, "Animals deserve space, study " + std::to_string(i));
  }
  return d.debate_id;
}

}  // namespace

TEST_SUITE("store")
{
  TEST_CASE("fresh store has no debates")
  {
    test::TempDir dir;
    FileStore store(dir.path());
    CHECK(code_of([&] { store.load_debate("nope"); }) == ErrorCode::NotFound);
    CHECK_FALSE(store.has_debate("nope"));
    CHECK(store.debate_ids().empty());
  }

  TEST_CASE("sequence rules")
  {
    test::TempDir dir;
    FileStore store(dir.path());
    CHECK(code_of([&] { store.append_event(created("d1", 2)); }) == ErrorCode::Conflict);
    CHECK(store.append_event(created("d1")) == 1);
    CHECK(code_of([&] { store.append_event(created("d1", 1)); }) == ErrorCode::Conflict);
    CHECK(code_of([&] { store.append_event(created("d1", 3)); }) == ErrorCode::Conflict);
    CHECK(store.last_sequence("d1") == 1);
    CHECK(code_of([&] { store.append_event(created("../evil")); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("two writers racing for one sequence: exactly one wins")
  {
    for (int trial = 0; trial < 20; ++trial) {
      test::TempDir dir;
      FileStore store(dir.path());
      store.append_event(created("race"));
      std::atomic<int> ok{0};
      std::atomic<int> conflict{0};
      auto writer = [&] {
        StoredEvent e = created("race", 2);
        e.kind = EventKind::Finished;
        e.payload = nlohmann::json::object();
        try {
          store.append_event(e);
          ++ok;
        } catch (const Error& err) {
          if (err.code() == ErrorCode::Conflict) ++conflict;
        }
      };
      std::thread a(writer);
      std::thread b(writer);
      a.join();
      b.join();
      CHECK(ok == 1);
      CHECK(conflict == 1);
      CHECK(store.read_events("race").size() == 2);
    }
  }

  TEST_CASE("separate store instances on one directory also serialize")
  {
    test::TempDir dir;
    FileStore first(dir.path());
    first.append_event(created("shared"));
    FileStore second(dir.path());
    StoredEvent e = created("shared", 2);
    e.kind = EventKind::Finished;
    e.payload = nlohmann::json::object();
    CHECK(second.append_event(e) == 2);
    CHECK(code_of([&] { first.append_event(e); }) == ErrorCode::Conflict);
  }

  TEST_CASE("replay equals the live state")
  {
    test::TempDir dir;
    auto store = std::make_shared<FileStore>(dir.path());
    test::FakeClock clock;
    Engine engine({}, test::stub_gateway(), store, clock.clock());
    const auto d = engine.create_debate(std::nullopt, "against", 3);
    CHECK(store->load_debate(d.debate_id) == engine.get_state(d.debate_id));
    for (int r = 0; r < 3; ++r) {
      engine.submit_argument(d.debate_id, "Round " + std::to_string(r) + ": the evidence says no.");
      CHECK(store->load_debate(d.debate_id) == engine.get_state(d.debate_id));
    }
    CHECK(engine.get_state(d.debate_id).phase == Phase::Finished);
  }

  TEST_CASE("every prefix of a log folds to a consistent state")
  {
    test::TempDir dir;
    auto store = std::make_shared<FileStore>(dir.path());
    const auto id = play(store, 3, 3);
    const auto events = store->read_events(id);
    CHECK(events.size() == 1 + 3 * 4 + 1);
    std::size_t last_rounds = 0;
    for (std::size_t n = 1; n <= events.size(); ++n) {
      const std::vector<StoredEvent> prefix(events.begin(), events.begin() + n);
      const DebateState s = fold_events(prefix);
      CHECK_NOTHROW(check_consistency(s));
      CHECK(s.completed_rounds() >= last_rounds);
      last_rounds = s.completed_rounds();
    }
  }

  TEST_CASE("a truncated line is reported by number")
  {
    test::TempDir dir;
    auto store = std::make_shared<FileStore>(dir.path());
    const auto id = play(store, 3, 2);
    const auto path = dir.path() / "debates" / (id + ".jsonl");
    auto lines = read_lines(path);
    REQUIRE(lines.size() == 9);
    {
      std::ofstream out(path, std::ios::trunc | std::ios::binary);
      for (int i = 0; i < 6; ++i) out << lines[i] << '\n';
      out << lines[6].substr(0, lines[6].size() / 2);
    }
    FileStore reopened(dir.path());
    try {
      reopened.load_debate(id);
      FAIL("expected corrupt-data");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CorruptData);
      CHECK(e.line() == 7);
    }
  }

  TEST_CASE("garbage and schema errors are corrupt-data")
  {
    test::TempDir dir;
    auto store = std::make_shared<FileStore>(dir.path());
    const auto id = play(store, 3, 1);
    const auto path = dir.path() / "debates" / (id + ".jsonl");
    auto lines = read_lines(path);
    lines[2] = "{not json";
    {
      std::ofstream out(path, std::ios::trunc | std::ios::binary);
      for (const auto& l : lines) out << l << '\n';
    }
    FileStore reopened(dir.path());
    try {
      reopened.load_debate(id);
      FAIL("expected corrupt-data");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CorruptData);
      CHECK(e.line() == 3);
    }

    StoredEvent bad = created("x");
    bad.payload.erase("topic");
    CHECK(code_of([&] { fold_events({bad}); }) == ErrorCode::CorruptData);
    CHECK(code_of([] { fold_events({}); }) == ErrorCode::NotFound);
  }

  TEST_CASE("population persistence")
  {
    test::TempDir dir;
    FileStore store(dir.path(), {12, 99});
    const Population fresh = store.load_population("ethics");
    CHECK(fresh == init_population(12, population_seed(99, "ethics")));

    Population p = init_population(20, 123);
    p.generation = 7;
    p.members[0] = {0.1, 0.2, 0.7};
    p.members[1] = {1.0 / 3.0, 1.0 / 7.0, 1.0 - 1.0 / 3.0 - 1.0 / 7.0};
    store.save_population("ethics", p);
    CHECK(store.load_population("ethics") == p);

    const auto path = dir.path() / "populations" / "ethics.json";
    auto doc = nlohmann::json::parse(std::ifstream(path));
    CHECK(doc["format"] == "arena-population");
    doc["version"] = 2;
    std::ofstream(path, std::ios::trunc) << doc.dump();
    CHECK(code_of([&] { store.load_population("ethics"); }) == ErrorCode::CorruptData);
    std::ofstream(path, std::ios::trunc) << "garbage";
    CHECK(code_of([&] { store.load_population("ethics"); }) == ErrorCode::CorruptData);
  }

  TEST_CASE("data directory resolution")
  {
    CHECK(resolve_data_dir(std::string("/tmp/x")) == std::filesystem::path("/tmp/x"));
    ::setenv("DEBATE_ARENA_DATA", "/tmp/from-env", 1);
    CHECK(resolve_data_dir(std::nullopt) == std::filesystem::path("/tmp/from-env"));
    ::unsetenv("DEBATE_ARENA_DATA");
    CHECK(resolve_data_dir(std::nullopt) == std::filesystem::path("arena-data"));
  }
}
