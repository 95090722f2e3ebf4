#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gcaptcha/challenge.hpp"

namespace gcaptcha::testing {

inline std::filesystem::path source_dir() { return GCAPTCHA_SOURCE_DIR; }
inline std::filesystem::path template_dir() { return source_dir() / "templates"; }
inline std::filesystem::path asset_dir() { return source_dir() / "assets"; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline GameTemplate soccer_template() {
  return parse_template(read_file(template_dir() / "soccer.json"));
}

// Template with exactly k draggables.
inline GameTemplate fixed_k_template(int k) {
  GameTemplate t = soccer_template();
  t.template_id = "soccer_k" + std::to_string(k);
  t.distractor_count_range = {k - 1, k - 1};
  return t;
}

}  // namespace gcaptcha::testing
