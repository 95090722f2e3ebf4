#pragma once

// Deterministic request sequences covering every endpoint and error code.
// Both the unit tests and the acceptance binary compare these responses with
// the documents in tests/golden.

#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "gcaptcha/api.hpp"
#include "gcaptcha/json_codec.hpp"
#include "test_support.hpp"

namespace gcaptcha::testing {

struct NamedResponse {
  std::string name;
  ApiResponse response;
};

inline std::filesystem::path golden_dir() { return source_dir() / "tests" / "golden"; }

inline std::string attempt_body(const ChallengeSolution& s, Point press, Point release,
                                std::int64_t t0 = 0, std::int64_t t1 = 1200) {
  return encode_attempt({s.challenge_id, {press, t0}, {release, t1}});
}

inline std::vector<NamedResponse> protocol_scenarios() {
  std::vector<NamedResponse> out;
  const auto templates = load_templates(template_dir());
  const auto assets = AssetCatalog::load(asset_dir());

  ServiceOptions opts;
  opts.seed = 2024;
  opts.rate.max_issues_per_window = 4;
  opts.rate.max_failures_per_window = 3;
  ManualClock clock;
  CaptchaService svc(templates, assets, clock, opts);

  auto issue = [&](const std::string& name) {
    ApiResponse r = svc.issue_challenge("client");
    out.push_back({name, r});
    return json::parse(r.body);
  };
  auto solution_of = [&](const json& spec) {
    return *svc.sessions().peek(spec["challenge_id"].get<std::string>());
  };

  const json first = issue("issue_201");
  const ChallengeSolution s1 = solution_of(first);
  clock.advance(milliseconds{9500});
  const ApiResponse correct = svc.answer(
      s1.challenge_id, attempt_body(s1, s1.target_region.center(), s1.goal_region.center()),
      "client");
  out.push_back({"answer_correct", correct});
  const std::string token = json::parse(correct.body)["success_token"];
  out.push_back({"verify_valid", svc.verify_token(token)});
  out.push_back({"verify_spent", svc.verify_token(token)});

  out.push_back({"answer_replayed",
                 svc.answer(s1.challenge_id,
                            attempt_body(s1, s1.target_region.center(), s1.goal_region.center()),
                            "client")});

  const json second = issue("issue_second");
  const ChallengeSolution s2 = solution_of(second);
  clock.advance(milliseconds{12});
  // Client timestamps claim a 9.5 s drag; the server saw 12 ms.
  const ApiResponse fast = svc.answer(
      s2.challenge_id,
      attempt_body(s2, s2.target_region.center(), s2.goal_region.center(), 1000, 10500), "client");
  out.push_back({"answer_too_fast", fast});

  const json third = json::parse(fast.body)["next_challenge"];
  const ChallengeSolution s3 = solution_of(third);
  clock.advance(seconds{3});
  const ApiResponse wrong =
      svc.answer(s3.challenge_id, attempt_body(s3, s3.target_region.center(), {0, 0}), "client");
  out.push_back({"answer_wrong", wrong});

  const json fourth = json::parse(wrong.body)["next_challenge"];
  const ChallengeSolution s4 = solution_of(fourth);
  clock.advance(seconds{1});
  // Third failure in the window (replay, too_fast, wrong came first).
  out.push_back({"answer_429", svc.answer(s4.challenge_id,
                                          attempt_body(s4, {0, 0}, {0, 0}), "client")});

  (void)issue("issue_third");
  (void)issue("issue_fourth");
  issue("issue_429");

  const std::string unknown(32, 'a');
  out.push_back({"answer_404",
                 svc.answer(unknown, encode_attempt({unknown, {{1, 1}, 0}, {{2, 2}, 10}}), "other")});
  out.push_back({"answer_malformed_id", svc.answer("xyz", "{}", "other")});
  out.push_back({"answer_malformed_body", svc.answer(unknown, "{\"challenge_id\":1}", "other")});
  out.push_back({"answer_id_mismatch",
                 svc.answer(unknown, encode_attempt({std::string(32, 'b'), {{1, 1}, 0}, {{2, 2}, 10}}),
                            "other")});
  out.push_back({"verify_malformed", svc.verify_token("not-a-token")});
  out.push_back({"asset_invalid", svc.asset("../secret")});
  out.push_back({"asset_missing", svc.asset("unicorn")});

  ManualClock empty_clock;
  CaptchaService empty({}, assets, empty_clock, opts);
  out.push_back({"issue_503", empty.issue_challenge("client")});
  return out;
}

// Golden document: status, content type, and parsed body.
inline json golden_document(const ApiResponse& r) {
  return {{"status", r.status}, {"content_type", r.content_type}, {"body", json::parse(r.body)}};
}

inline bool update_golden_requested() {
  const char* v = std::getenv("GCAPTCHA_UPDATE_GOLDEN");
  return v != nullptr && std::string(v) == "1";
}

inline void write_golden(const NamedResponse& n) {
  std::filesystem::create_directories(golden_dir());
  std::ofstream(golden_dir() / (n.name + ".json")) << golden_document(n.response).dump(2) << "\n";
}

// Empty string on a match, otherwise a description of the mismatch.
inline std::string compare_golden(const NamedResponse& n) {
  const std::string text = read_file(golden_dir() / (n.name + ".json"));
  if (text.empty()) return "missing golden file " + n.name + ".json";
  const json expected = json::parse(text);
  const json actual = golden_document(n.response);
  if (expected == actual) return {};
  return n.name + ": expected " + expected.dump() + " got " + actual.dump();
}

}  // namespace gcaptcha::testing
