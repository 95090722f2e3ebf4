#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcaptcha/challenge.hpp"
#include "gcaptcha/verifier.hpp"

namespace gcaptcha {

class UnknownStrategy : public std::invalid_argument {
 public:
  explicit UnknownStrategy(const std::string& name)
      : std::invalid_argument("unknown attack strategy '" + name + "'") {}
};

enum class StrategyName { uniform_random, object_aware, goal_aware, replay, oracle };

[[nodiscard]] std::string_view to_string(StrategyName s);

struct AttackStrategy {
  StrategyName name = StrategyName::uniform_random;
  // Strategy-specific knobs; see make_strategy for the accepted keys.
  std::map<std::string, std::string> parameters;
};

// Validates the name and parameter keys. Accepted parameters:
//   all strategies: delay_ms (live mode only; wait before answering)
//   replay:        capture (path to an AttemptPayload JSON file, live mode)
[[nodiscard]] AttackStrategy make_strategy(
    const std::string& name, std::map<std::string, std::string> parameters = {});

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

inline constexpr double kZ95 = 1.959963984540054;

[[nodiscard]] Interval wilson_interval(std::uint64_t successes,
                                       std::uint64_t trials, double z = kZ95);

struct AttackReport {
  AttackStrategy strategy;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double empirical_rate = 0.0;
  std::optional<double> analytic_rate;
  Interval wilson_95;
  std::uint64_t seed = 0;
  std::map<Verdict, std::uint64_t> verdicts;
};

// Exact bypass probability for the stateless guessing adversaries; nullopt
// for replay and oracle, which are measured only.
[[nodiscard]] std::optional<double> analytic_success_probability(
    const ChallengeSpec& spec, const ChallengeSolution& solution,
    const AttackStrategy& strategy);

struct AttackOptions {
  // 0 picks std::thread::hardware_concurrency(). The report does not depend
  // on the worker count.
  unsigned workers = 0;
};

// Offline harness: every trial draws a fresh challenge, lets the bot answer
// from the client-visible spec, and adjudicates through the consume-once
// session store and verify_goal.
[[nodiscard]] AttackReport run_attack(const AttackStrategy& strategy,
                                      const std::vector<GameTemplate>& templates,
                                      std::uint64_t trials, std::uint64_t seed,
                                      const AttackOptions& options = {});

struct LiveOptions {
  // Replay only: the answer to replay. When absent the bot captures its own
  // first submission.
  std::optional<AttemptPayload> captured;
};

// Same bots against a running server over HTTP.
[[nodiscard]] AttackReport run_attack_live(const AttackStrategy& strategy,
                                           const std::string& base_url,
                                           std::uint64_t trials,
                                           std::uint64_t seed,
                                           const LiveOptions& options = {});

// Cartesian product of template overrides. Keys, in row order:
// draggables, distractors, goal_width, goal_height, object_width,
// object_height, min_gap.
using ParameterGrid = std::vector<std::pair<std::string, std::vector<int>>>;

[[nodiscard]] ParameterGrid parse_grid(const std::string& json_text);
[[nodiscard]] ParameterGrid default_sweep_grid();

struct SweepRow {
  std::map<std::string, int> point;
  AttackReport report;
};

[[nodiscard]] std::vector<SweepRow> sweep(const AttackStrategy& strategy,
                                          const std::vector<GameTemplate>& templates,
                                          std::uint64_t trials,
                                          const ParameterGrid& grid,
                                          std::uint64_t seed,
                                          const AttackOptions& options = {});

// Applies one grid point to a template; throws ValidationError on an
// invalid result.
[[nodiscard]] GameTemplate apply_overrides(GameTemplate t,
                                           const std::map<std::string, int>& point);

inline constexpr const char* kReportCsvHeader =
    "strategy,trials,successes,empirical_rate,analytic_rate,wilson_low,"
    "wilson_high,seed";

void write_report_csv(std::ostream& out, const std::vector<AttackReport>& reports);
// Normative columns followed by one column per grid key.
void write_sweep_csv(std::ostream& out, const ParameterGrid& grid,
                     const std::vector<SweepRow>& rows);

}  // namespace gcaptcha
