// captcha-metrics: usability report from recorded survey responses.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "gcaptcha/metrics.hpp"

int main(int argc, char** argv) {
  CLI::App app{"CAPTCHA usability survey report"};

  std::string input;
  std::string out_path;
  std::string json_path;
  app.add_option("--input", input, "survey CSV")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "text report destination")->required();
  app.add_option("--json", json_path, "optional JSON report destination");
  CLI11_PARSE(app, argc, argv);

  namespace m = gcaptcha::metrics;
  try {
    std::ifstream in(input);
    const m::IngestResult data = m::ingest(in);
    for (const auto& e : data.errors) {
      std::cerr << input << ':' << e.line << ": " << e.message << '\n';
    }
    const m::UsabilityReport report = m::report(data.responses);

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << m::render_text(report);
    if (!json_path.empty()) {
      std::ofstream js(json_path);
      if (!js) throw std::runtime_error("cannot write " + json_path);
      js << m::to_json(report).dump(2) << '\n';
    }
    return data.errors.empty() ? 0 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
