// captcha-attack: measures bot bypass rates offline or against a live server.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "gcaptcha/attack.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Drag-and-drop game CAPTCHA attack simulator"};

  std::string strategy_name = "uniform_random";
  std::string template_dir;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::string live;
  std::string sweep_path;
  std::string out_path;
  std::vector<std::string> params;
  unsigned workers = 0;

  app.add_option("--strategy", strategy_name,
                 "uniform_random | object_aware | goal_aware | replay | oracle")
      ->capture_default_str();
  app.add_option("--templates", template_dir, "directory of game template JSON files")
      ->check(CLI::ExistingDirectory);
  app.add_option("--trials", trials, "number of trials")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--live", live, "attack a running server, e.g. http://127.0.0.1:8080");
  app.add_option("--sweep", sweep_path,
                 "parameter grid JSON file, or 'default' for the built-in grid");
  app.add_option("--out", out_path, "write the CSV report here instead of stdout");
  app.add_option("--param", params, "strategy parameter key=value (repeatable)");
  app.add_option("--workers", workers, "worker threads for offline runs (0 = all cores)");
  CLI11_PARSE(app, argc, argv);

  try {
    std::map<std::string, std::string> kv;
    for (const auto& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--param expects key=value");
      kv[p.substr(0, eq)] = p.substr(eq + 1);
    }
    const gcaptcha::AttackStrategy strategy = gcaptcha::make_strategy(strategy_name, kv);

    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw std::runtime_error("cannot write " + out_path);
    }
    std::ostream& out = out_path.empty() ? std::cout : file;

    if (!live.empty()) {
      if (!sweep_path.empty()) throw std::invalid_argument("--sweep is offline only");
      const auto report = gcaptcha::run_attack_live(strategy, live, trials, seed);
      gcaptcha::write_report_csv(out, {report});
      return 0;
    }

    if (template_dir.empty()) throw std::invalid_argument("--templates is required offline");
    const auto templates = gcaptcha::load_templates(template_dir);
    const gcaptcha::AttackOptions opts{workers};

    if (!sweep_path.empty()) {
      gcaptcha::ParameterGrid grid;
      if (sweep_path == "default") {
        grid = gcaptcha::default_sweep_grid();
      } else {
        std::ifstream in(sweep_path);
        if (!in) throw std::runtime_error("cannot read " + sweep_path);
        std::stringstream buf;
        buf << in.rdbuf();
        grid = gcaptcha::parse_grid(buf.str());
      }
      const auto rows = gcaptcha::sweep(strategy, templates, trials, grid, seed, opts);
      gcaptcha::write_sweep_csv(out, grid, rows);
      return 0;
    }

    const auto report = gcaptcha::run_attack(strategy, templates, trials, seed, opts);
    gcaptcha::write_report_csv(out, {report});
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
