#include <doctest.h>
#include <fcntl.h>
#include <httplib.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <thread>

#include "gcaptcha/json_codec.hpp"
#include "test_support.hpp"

extern char** environ;

namespace gt = gcaptcha::testing;
namespace fs = std::filesystem;

namespace {

fs::path tool(const std::string& name) { return fs::path(GCAPTCHA_BINARY_DIR) / "tools" / name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gcaptcha_tools_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

int run(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("captcha-metrics renders the fixture report") {
  const fs::path out = scratch("report.txt");
  const fs::path js = scratch("report.json");
  const int rc = run(quoted(tool("captcha-metrics")) + " --input " +
                     quoted(gt::source_dir() / "fixtures" / "survey_50.csv") + " --out " + quoted(out) +
                     " --json " + quoted(js));
  CHECK(rc == 0);
  const std::string text = gt::read_file(out);
  CHECK(text.find("97.78") != std::string::npos);
  const auto doc = gcaptcha::json::parse(gt::read_file(js));
  CHECK(doc["participants"] == 50);
}

TEST_CASE("captcha-metrics flags bad rows with exit code 3") {
  const fs::path in = scratch("bad.csv");
  std::ofstream(in) << "participant_id,age,gender,education,internet_years,internet_frequency,"
                       "vision_impaired,flash_solve_time_ms,flash.learnability\n"
                    << "a,20,male,phd,3,daily,no,9000,5\n"
                    << "b,20,male,phd,3,daily,no,9000,9\n";
  CHECK(run(quoted(tool("captcha-metrics")) + " --input " + quoted(in) + " --out " +
            quoted(scratch("bad.txt")) + " 2>/dev/null") == 3);
}

TEST_CASE("captcha-attack writes a CSV report") {
  const fs::path out = scratch("attack.csv");
  CHECK(run(quoted(tool("captcha-attack")) + " --strategy goal_aware --trials 500 --seed 3 --templates " +
            quoted(gt::template_dir()) + " --out " + quoted(out)) == 0);
  std::istringstream csv(gt::read_file(out));
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  CHECK(header == "strategy,trials,successes,empirical_rate,analytic_rate,wilson_low,wilson_high,seed");
  CHECK(row.rfind("goal_aware,500,", 0) == 0);

  const fs::path sweep = scratch("sweep.csv");
  CHECK(run(quoted(tool("captcha-attack")) + " --strategy uniform_random --trials 50 --sweep default" +
            " --templates " + quoted(gt::template_dir()) + " --out " + quoted(sweep)) == 0);
  const std::string s = gt::read_file(sweep);
  CHECK(std::count(s.begin(), s.end(), '\n') == 16);

  CHECK(run(quoted(tool("captcha-attack")) + " --strategy telepathy --templates " +
            quoted(gt::template_dir()) + " 2>/dev/null") != 0);
}

TEST_CASE("captcha-server serves and shuts down on SIGTERM") {
  const fs::path log = scratch("server.log");
  const std::string templates = gt::template_dir().string();
  const std::string assets = gt::asset_dir().string();
  const std::string bin = tool("captcha-server").string();
  std::vector<std::string> args{bin,        "--bind",  "127.0.0.1:0", "--templates", templates,
                                "--assets", assets,    "--seed",      "5",
                                "--min-plausible-ms", "1"};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, log.c_str(), O_WRONLY | O_CREAT | O_TRUNC,
                                   0644);
  pid_t pid = 0;
  REQUIRE(posix_spawn(&pid, bin.c_str(), &actions, nullptr, argv.data(), environ) == 0);
  posix_spawn_file_actions_destroy(&actions);

  int port = -1;
  const std::regex listening(R"(listening on 127\.0\.0\.1:(\d+))");
  for (int i = 0; i < 200 && port < 0; ++i) {
    std::smatch m;
    const std::string text = gt::read_file(log);
    if (std::regex_search(text, m, listening)) port = std::stoi(m[1].str());
    else std::this_thread::sleep_for(std::chrono::milliseconds(25));
  }
  if (port > 0) {
    httplib::Client cli("127.0.0.1", port);
    auto r = cli.Post("/api/v1/challenge", "", "application/json");
    REQUIRE(r);
    CHECK(r->status == 201);
    const auto spec = gcaptcha::json::parse(r->body);
    CHECK(spec["objects"].size() >= 3);

    // Live attack CLI against the same server.
    const fs::path out = scratch("live.csv");
    CHECK(run(quoted(tool("captcha-attack")) + " --strategy goal_aware --trials 20 --seed 1 --live " +
              "http://127.0.0.1:" + std::to_string(port) + " --out " + quoted(out)) == 0);
    CHECK(gt::read_file(out).find("goal_aware,20,") != std::string::npos);
  }
  ::kill(pid, SIGTERM);
  int status = 0;
  ::waitpid(pid, &status, 0);
  CHECK(port > 0);
  CHECK(gt::read_file(log).find("DETERMINISTIC MODE") != std::string::npos);
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
}
