// captcha-server: serves challenges, sprite assets and verdicts over HTTP.
#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <iostream>

#include "gcaptcha/api.hpp"
#include "gcaptcha/http_server.hpp"

namespace {

gcaptcha::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

bool split_bind(const std::string& bind, std::string& host, int& port) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos || colon == 0) return false;
  host = bind.substr(0, colon);
  try {
    port = std::stoi(bind.substr(colon + 1));
  } catch (const std::exception&) {
    return false;
  }
  return port >= 0 && port <= 65535;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drag-and-drop game CAPTCHA server"};

  std::string bind = "127.0.0.1:8080";
  std::string template_dir;
  std::string asset_dir;
  std::optional<std::uint64_t> seed;
  std::int64_t min_plausible_ms = 500;
  std::optional<std::int64_t> max_session_ms;
  std::int64_t ttl_seconds = 120;
  std::int64_t rate_window_seconds = 60;
  int max_issues = 30;
  int max_failures = 10;

  app.add_option("--bind", bind, "host:port to listen on")->capture_default_str();
  app.add_option("--templates", template_dir, "directory of game template JSON files")
      ->required()->check(CLI::ExistingDirectory);
  app.add_option("--assets", asset_dir, "directory of sprite images")
      ->required()->check(CLI::ExistingDirectory);
  app.add_option("--seed", seed, "deterministic test mode seed (never in production)");
  app.add_option("--min-plausible-ms", min_plausible_ms,
                 "answers faster than this are rejected as too_fast")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--max-session-ms", max_session_ms,
                 "answers slower than this are rejected as expired (default: ttl)")
      ->check(CLI::PositiveNumber);
  app.add_option("--ttl-seconds", ttl_seconds, "challenge lifetime")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--rate-window-seconds", rate_window_seconds, "rate limit window")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--max-issues", max_issues, "challenges per client per window")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--max-failures", max_failures, "failed answers per client per window")
      ->capture_default_str()->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  std::string host;
  int port = 0;
  if (!split_bind(bind, host, port)) {
    std::cerr << "error: --bind expects host:port, got '" << bind << "'\n";
    return 2;
  }

  gcaptcha::ServiceOptions opts;
  opts.challenge_ttl = gcaptcha::seconds{ttl_seconds};
  opts.timing.min_plausible = gcaptcha::milliseconds{min_plausible_ms};
  opts.timing.max_session =
      gcaptcha::milliseconds{max_session_ms.value_or(ttl_seconds * 1000)};
  opts.rate.window = gcaptcha::seconds{rate_window_seconds};
  opts.rate.max_issues_per_window = max_issues;
  opts.rate.max_failures_per_window = max_failures;
  opts.seed = seed;
  if (!opts.timing.valid()) {
    std::cerr << "error: need 0 < min-plausible-ms < max-session-ms\n";
    return 2;
  }

  std::vector<gcaptcha::GameTemplate> templates;
  gcaptcha::AssetCatalog assets;
  try {
    templates = gcaptcha::load_templates(template_dir);
    assets = gcaptcha::AssetCatalog::load(asset_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  if (templates.empty()) {
    std::cerr << "warning: no templates in " << template_dir
              << "; challenge requests will return 503\n";
  }
  for (const auto& t : templates) {
    for (const auto& [cls, sprite] : t.sprite_refs) {
      if (assets.find(sprite) == nullptr) {
        std::cerr << "warning: template " << t.template_id << " references missing sprite "
                  << sprite << '\n';
      }
    }
  }
  if (seed) {
    std::cerr << "*** DETERMINISTIC MODE (seed " << *seed
              << "): challenge ids and layouts are predictable; test use only ***\n";
  }

  gcaptcha::SystemClock clock;
  gcaptcha::CaptchaService service(std::move(templates), std::move(assets), clock, opts);
  gcaptcha::HttpServer server(service);
  const int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << bind << '\n';
    return 1;
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "listening on " << host << ':' << bound << '\n';
  server.serve();
  g_server = nullptr;
  return 0;
}
