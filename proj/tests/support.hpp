#pragma once

#include "arena/engine.hpp"
#include "arena/gateway.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <string>
#include <thread>

namespace test {

/// Temporary directory removed on destruction.
class TempDir {
public:
  TempDir()
  {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("arena-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir()
  {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

/// Manually advanced clock.
struct FakeClock {
  std::shared_ptr<std::atomic<arena::Timestamp>> now =
      std::make_shared<std::atomic<arena::Timestamp>>(1'000'000);

  arena::Clock clock() const
  {
    auto n = now;
    return [n] { return n->load(); };
  }
  void advance(arena::Timestamp ms) const { now->fetch_add(ms); }
};

/// Stub provider that sleeps before answering, to widen race windows.
class SlowStub final : public arena::Provider {
public:
  explicit SlowStub(std::chrono::milliseconds delay) : delay_(delay) {}
  std::string complete(const arena::CompletionRequest& request) override
  {
    std::this_thread::sleep_for(delay_);
    return inner_.complete(request);
  }
  bool live() const override { return false; }

private:
  std::chrono::milliseconds delay_;
  arena::StubProvider inner_;
};

/// Provider that always fails.
class FailingProvider final : public arena::Provider {
public:
  std::string complete(const arena::CompletionRequest&) override
  {
    arena::fail(arena::ErrorCode::ProviderUnavailable, "offline");
  }
  bool live() const override { return true; }
};

inline std::shared_ptr<arena::Gateway> stub_gateway()
{
  return std::make_shared<arena::Gateway>(arena::ProviderConfig::all_stub());
}


/// Gateway where one role uses `provider` and the rest are stubs.
inline std::shared_ptr<arena::Gateway> gateway_with(arena::ProviderRole role,
                                                    std::shared_ptr<arena::Provider> provider)
{
  std::map<arena::ProviderRole, std::shared_ptr<arena::Provider>> providers;
  for (auto r : arena::kAllRoles) providers[r] = std::make_shared<arena::StubProvider>();
  providers[role] = std::move(provider);
  return std::make_shared<arena::Gateway>(std::move(providers));
}

/// Independent FNV-1a 64 used as a test oracle.
inline std::uint64_t oracle_fnv(const std::string& s)
{
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h = (h ^ c) * 1099511628211ULL;
  }
  return h;
}

}  // namespace test
