#include "arena/debate_state.hpp"
#include "arena/error.hpp"
#include "arena/gateway.hpp"
#include "arena/predictor.hpp"
#include "arena/resources.hpp"

#include "support.hpp"

#include <doctest.h>

#include <set>

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

DebateState ai_turn(Position user = Position::For)
{
  DebateState d;
  d.debate_id = "g1";
  d.topic = "Social media does more harm than good";
  d.user_position = user;
  d.ai_position = complement(user);
  d.phase = Phase::Processing;
  d.transcript.push_back({Side::User, "It isolates teenagers.", {}, false});
  return d;
}

}  // namespace

TEST_SUITE("gateway")
{
  TEST_CASE("stub_hash is FNV-1a")
  {
    CHECK(stub_hash("") == 0xcbf29ce484222325ULL);
    CHECK(stub_hash("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(stub_hash("a") == test::oracle_fnv("a"));
    CHECK(stub_hash("same prompt") == stub_hash("same prompt"));
    CHECK(stub_dimensions(0x09429707b5d2bc9aULL) == std::array<int, 4>{0, 1, 1, 5});
  }

  TEST_CASE("complete routes by role and is deterministic in stub mode")
  {
    Gateway gw(ProviderConfig::all_stub());
    const auto req = gw.make_request(ProviderRole::Opponent, "hello", {{"position", "for"}});
    const Completion a = gw.complete(req);
    const Completion b = gw.complete(req);
    CHECK(a == b);
    CHECK_FALSE(a.degraded);

    CompletionRequest empty = req;
    empty.prompt.clear();
    CHECK(code_of([&] { gw.complete(empty); }) == ErrorCode::InvalidArgument);
    CompletionRequest no_time = req;
    no_time.timeout_ms = 0;
    CHECK(code_of([&] { gw.complete(no_time); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("unconfigured role is invalid-argument")
  {
    std::map<ProviderRole, std::shared_ptr<Provider>> providers{
        {ProviderRole::Topic, std::make_shared<StubProvider>()}};
    Gateway gw(providers);
    CHECK(code_of([&] {
            gw.complete(gw.make_request(ProviderRole::Evaluator, "x", {}));
          }) == ErrorCode::InvalidArgument);

    ProviderConfig partial = ProviderConfig::all_stub();
    partial.entries.erase(ProviderRole::Assistant);
    CHECK(code_of([&] { partial.validate(); }) == ErrorCode::InvalidArgument);

    ProviderConfig http = ProviderConfig::all_stub();
    http.entries[ProviderRole::Opponent].kind = ProviderKind::Http;
    CHECK(code_of([&] { http.validate(); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("failing provider falls back to the stub")
  {
    auto gw = test::gateway_with(ProviderRole::Opponent, std::make_shared<test::FailingProvider>());
    const Completion c = gw->generate_opponent_argument(ai_turn(), "balanced",
                                                        {Tactic::Reframe, 0.5});
    CHECK(c.degraded);
    CHECK(c.text.find("reframe") != std::string::npos);
  }

  TEST_CASE("generate_topics")
  {
    Gateway gw(ProviderConfig::all_stub());
    const auto three = gw.generate_topics(3, 17);
    REQUIRE(three.size() == 3);
    CHECK(std::set<std::string>(three.begin(), three.end()).size() == 3);
    std::set<std::string> bank;
    for (const auto& t : topic_bank()) bank.insert(t.text);
    for (const auto& t : three) CHECK(bank.count(t) == 1);
    CHECK(gw.generate_topics(3, 17) == three);

    const auto all = gw.generate_topics(50, 1);
    CHECK(std::set<std::string>(all.begin(), all.end()).size() == 50);
    CHECK(code_of([&] { gw.generate_topics(0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { gw.generate_topics(51); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("opponent arguments carry position and tactic")
  {
    Gateway gw(ProviderConfig::all_stub());
    for (Position p : {Position::For, Position::Against}) {
      for (Tactic t : kAllTactics) {
        const Completion c = gw.generate_opponent_argument(ai_turn(p), "emphasize-logic", {t, 0.5});
        CHECK(c.text.find(std::string(to_string(complement(p)))) != std::string::npos);
        CHECK(c.text.find(std::string(to_string(t))) != std::string::npos);
      }
    }

    DebateState finished = ai_turn();
    finished.phase = Phase::Finished;
    CHECK(code_of([&] {
            gw.generate_opponent_argument(finished, "balanced", {});
          }) == ErrorCode::InvalidState);

    DebateState users_turn = ai_turn();
    users_turn.transcript.clear();
    CHECK(code_of([&] {
            gw.generate_opponent_argument(users_turn, "balanced", {});
          }) == ErrorCode::InvalidState);
  }

  TEST_CASE("suggestions")
  {
    Gateway gw(ProviderConfig::all_stub());
    DebateState d = ai_turn();
    d.phase = Phase::AwaitingUser;
    const auto s = gw.generate_suggestions(d);
    CHECK(s.size() == 3);
    CHECK(gw.generate_suggestions(d) == s);
    for (const auto& line : s) CHECK_FALSE(line.empty());
    d.phase = Phase::Finished;
    CHECK(code_of([&] { gw.generate_suggestions(d); }) == ErrorCode::InvalidState);
  }

  TEST_CASE("raw_evaluate in stub mode")
  {
    Gateway gw(ProviderConfig::all_stub());
    const DebateState d = ai_turn();
    const std::string arg = "Screens harm sleep.";
    const auto dims = gw.raw_evaluate(arg, d, Side::User);
    const auto h = test::oracle_fnv(Gateway::render_evaluator_prompt(arg, d, Side::User));
    for (int k = 0; k < 4; ++k) {
      CHECK(dims[k] == static_cast<int>(((h >> (8 * k)) & 0xff) % 11));
    }
    CHECK(code_of([&] { gw.raw_evaluate("", d, Side::User); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("parse_dimensions")
  {
    const auto d = parse_dimensions(
        "Relevance: 7\npersuasiveness - 12\nLogical consistency: 3\nEvidence usage = 4");
    REQUIRE(d.has_value());
    CHECK(*d == std::array<int, 4>{7, 10, 3, 4});
    CHECK_FALSE(parse_dimensions("Relevance: 7").has_value());
  }

  TEST_CASE("replaying a request log reproduces outputs")
  {
    Gateway gw(ProviderConfig::all_stub());
    std::vector<std::pair<CompletionRequest, Completion>> log;
    gw.set_request_log([&](const CompletionRequest& r, const Completion& c) { log.emplace_back(r, c); });
    DebateState d = ai_turn();
    gw.generate_opponent_argument(d, "balanced", {Tactic::Rebut, 0.4});
    gw.raw_evaluate("Screens harm sleep.", d, Side::User);
    DebateState u = ai_turn();
    u.transcript.clear();
    u.phase = Phase::AwaitingUser;
    gw.generate_user_argument(u);
    gw.generate_topics(2, 5);  // served from the topic bank, not logged
    REQUIRE(log.size() == 3);

    Gateway fresh(ProviderConfig::all_stub());
    for (const auto& [request, completion] : log) CHECK(fresh.complete(request) == completion);
  }

  TEST_CASE("role names round-trip")
  {
    for (auto r : kAllRoles) CHECK(parse_role(to_string(r)) == r);
    CHECK(code_of([] { parse_role("judge"); }) == ErrorCode::InvalidArgument);
  }
}
