// HTTP server for the debate engine.

#include "arena/api.hpp"
#include "arena/config.hpp"
#include "arena/engine.hpp"
#include "arena/store.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <csignal>
#include <pthread.h>
#include <thread>

int main(int argc, char** argv)
{
  CLI::App app{"Debate arena HTTP server"};
  std::optional<int> port;
  std::optional<std::string> config_path;
  std::optional<std::string> data_dir;
  std::optional<std::string> auth;
  std::string host = "0.0.0.0";
  app.add_option("--port", port, "listen port (default 8080)")->check(CLI::Range(0, 65535));
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--data-dir", data_dir, "directory for event logs and populations");
  app.add_option("--auth", auth, "bearer-token authentication")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--host", host, "bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  // Signals are handled by a dedicated thread; every other thread inherits the mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    arena::AppConfig cfg = arena::load_app_config(config_path);
    if (auth) cfg.auth_enabled = *auth == "on";
    if (port) cfg.port = *port;
    if (data_dir) cfg.data_dir = data_dir;

    const auto dir = arena::resolve_data_dir(cfg.data_dir);
    auto store = std::make_shared<arena::FileStore>(
        dir, arena::PopulationDefaults{cfg.engine.ga.population_size, cfg.engine.seed});
    auto gateway = std::make_shared<arena::Gateway>(cfg.providers);
    auto engine = std::make_shared<arena::Engine>(cfg.engine, gateway, store);
    arena::ApiServer api(engine, {cfg.auth_enabled});
    arena::HttpFrontend frontend(api);

    const int bound = frontend.bind(host, cfg.port);
    fmt::print(stderr, "debate_server listening on {}:{} (data: {}, auth: {})\n", host, bound,
               dir.string(), cfg.auth_enabled ? "on" : "off");

    std::thread waiter([&] {
      int sig = 0;
      sigwait(&signals, &sig);
      frontend.stop();
    });
    frontend.run();
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    return 0;
  } catch (const arena::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return e.code() == arena::ErrorCode::InvalidArgument ? 2 : 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
