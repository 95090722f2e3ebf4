#include <httplib.h>

#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include "attack_bots.hpp"
#include "gcaptcha/api.hpp"
#include "gcaptcha/attack.hpp"
#include "gcaptcha/json_codec.hpp"

namespace gcaptcha {

namespace {

class LiveClient {
 public:
  explicit LiveClient(const std::string& base_url) : client_(base_url) {
    client_.set_connection_timeout(5);
    client_.set_read_timeout(10);
  }

  ChallengeSpec fetch() {
    auto res = client_.Post("/api/v1/challenge", "", "application/json");
    if (!res) throw std::runtime_error("challenge request failed: " + httplib::to_string(res.error()));
    if (res->status != 201) {
      throw std::runtime_error("challenge request returned HTTP " + std::to_string(res->status));
    }
    try {
      return parse_challenge_spec(json::parse(res->body));
    } catch (const json::exception& e) {
      throw ParseError(e.what());
    }
  }

  Verdict submit(const AttemptPayload& a) {
    auto res = client_.Post("/api/v1/challenge/" + a.challenge_id + "/answer",
                            encode_attempt(a), "application/json");
    if (!res) throw std::runtime_error("answer request failed: " + httplib::to_string(res.error()));
    if (res->status == 429) return Verdict::rate_limited;
    if (res->status == 404) return Verdict::wrong;
    if (res->status != 200) {
      throw std::runtime_error("answer request returned HTTP " + std::to_string(res->status));
    }
    const std::string v = json::parse(res->body).at("verdict").get<std::string>();
    for (Verdict candidate : {Verdict::correct, Verdict::wrong, Verdict::expired,
                              Verdict::replayed, Verdict::too_fast, Verdict::rate_limited}) {
      if (to_string(candidate) == v) return candidate;
    }
    throw ParseError("unknown verdict " + v);
  }

 private:
  httplib::Client client_;
};

// Spec-only estimate: all draggables of a template share one size, so the
// mean draggable area equals the target area.
std::optional<double> analytic_from_spec(const ChallengeSpec& spec,
                                         const AttackStrategy& strategy) {
  const SceneObject* goal = bots::find_goal(spec);
  if (goal == nullptr) return std::nullopt;
  double area = 0.0;
  std::size_t k = 0;
  for (const auto& o : spec.objects) {
    if (o.kind != ObjectKind::draggable) continue;
    area += static_cast<double>(o.region.area());
    ++k;
  }
  if (k == 0) return std::nullopt;
  if (strategy.name == StrategyName::uniform_random) {
    const double canvas = static_cast<double>(spec.canvas.width) * spec.canvas.height;
    return (area / static_cast<double>(k) / canvas) *
           (static_cast<double>(goal->region.area()) / canvas);
  }
  // The remaining formulas depend only on the goal and the draggable count.
  ChallengeSolution stand_in;
  stand_in.goal_region = goal->region;
  return analytic_success_probability(spec, stand_in, strategy);
}

AttemptPayload load_capture(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read capture file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_attempt(buf.str());
}

}  // namespace

AttackReport run_attack_live(const AttackStrategy& strategy,
                             const std::string& base_url, std::uint64_t trials,
                             std::uint64_t seed, const LiveOptions& options) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (strategy.name == StrategyName::oracle) {
    throw std::invalid_argument("the oracle strategy cannot run against a live server");
  }
  std::chrono::milliseconds delay{0};
  if (const auto it = strategy.parameters.find("delay_ms"); it != strategy.parameters.end()) {
    delay = std::chrono::milliseconds{std::stoll(it->second)};
  }
  const auto elapsed_t = static_cast<std::int64_t>(delay.count());

  LiveClient client(base_url);
  Rng rng = Rng::derive(seed, 0);
  AttackReport report;
  report.strategy = strategy;
  report.trials = trials;
  report.seed = seed;

  double analytic_sum = 0.0;
  bool analytic = strategy.name != StrategyName::replay;

  std::optional<AttemptPayload> captured = options.captured;
  if (strategy.name == StrategyName::replay && !captured) {
    if (const auto it = strategy.parameters.find("capture"); it != strategy.parameters.end()) {
      captured = load_capture(it->second);
    }
  }
  if (strategy.name == StrategyName::replay && !captured) {
    const ChallengeSpec spec = client.fetch();
    const bots::Move m = bots::choose(StrategyName::goal_aware, spec, nullptr, rng);
    captured = AttemptPayload{spec.challenge_id, {m.press, 0}, {m.release, elapsed_t}};
    std::this_thread::sleep_for(delay);
    (void)client.submit(*captured);
  }

  for (std::uint64_t i = 0; i < trials; ++i) {
    Verdict v;
    if (strategy.name == StrategyName::replay) {
      v = client.submit(*captured);
    } else {
      const ChallengeSpec spec = client.fetch();
      const bots::Move m = bots::choose(strategy.name, spec, nullptr, rng);
      std::this_thread::sleep_for(delay);
      v = client.submit({spec.challenge_id, {m.press, 0}, {m.release, elapsed_t}});
      if (const auto p = analytic_from_spec(spec, strategy)) {
        analytic_sum += *p;
      } else {
        analytic = false;
      }
    }
    ++report.verdicts[v];
    if (v == Verdict::correct) ++report.successes;
  }
  report.empirical_rate = static_cast<double>(report.successes) / static_cast<double>(trials);
  if (analytic) report.analytic_rate = analytic_sum / static_cast<double>(trials);
  report.wilson_95 = wilson_interval(report.successes, trials);
  return report;
}

}  // namespace gcaptcha
