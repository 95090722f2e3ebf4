#include "gcaptcha/attack.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <thread>

#include "gcaptcha/json_codec.hpp"
#include "gcaptcha/session.hpp"
#include "attack_bots.hpp"

namespace gcaptcha {

namespace {

constexpr std::uint64_t kPartitionTrials = 4096;

struct PartitionResult {
  std::uint64_t successes = 0;
  double analytic_sum = 0.0;
  bool analytic = true;
  std::map<Verdict, std::uint64_t> verdicts;
};

Verdict adjudicate_offline(SessionStore& store, const AttemptPayload& attempt,
                           WallTime at) {
  const ConsumeOutcome outcome = store.consume(attempt.challenge_id, at);
  if (const auto* s = std::get_if<ChallengeSolution>(&outcome)) {
    return verify_goal(*s, attempt.press.point, attempt.release.point) ==
                   GoalResult::correct
               ? Verdict::correct
               : Verdict::wrong;
  }
  if (std::holds_alternative<Replayed>(outcome)) return Verdict::replayed;
  if (std::holds_alternative<Expired>(outcome)) return Verdict::expired;
  return Verdict::wrong;
}

PartitionResult run_partition(const AttackStrategy& strategy,
                              const std::vector<GameTemplate>& templates,
                              std::uint64_t begin, std::uint64_t end,
                              std::uint64_t seed, std::uint64_t partition) {
  Rng rng = Rng::derive(seed, partition);
  SeededTokenSource tokens(rng.next());
  ManualClock clock;
  SessionStore store;
  PartitionResult result;

  for (std::uint64_t trial = begin; trial < end; ++trial) {
    const GameTemplate& t = pick_random_template(templates, rng);
    const Challenge c = generate_challenge(t, rng, clock, tokens);
    store.store(c.solution);
    const bots::Move m = bots::choose(strategy.name, c.spec, &c.solution, rng);
    const AttemptPayload attempt{c.spec.challenge_id, {m.press, 0}, {m.release, 0}};
    const Verdict v = adjudicate_offline(store, attempt, clock.now());
    ++result.verdicts[v];
    if (v == Verdict::correct) ++result.successes;
    if (const auto p = analytic_success_probability(c.spec, c.solution, strategy)) {
      result.analytic_sum += *p;
    } else {
      result.analytic = false;
    }
  }
  return result;
}

// Captures one correct answer, then replays it against fresh traffic.
PartitionResult run_replay(const std::vector<GameTemplate>& templates,
                           std::uint64_t trials, std::uint64_t seed) {
  Rng rng = Rng::derive(seed, 0);
  SeededTokenSource tokens(rng.next());
  ManualClock clock;
  SessionStore store;
  PartitionResult result;
  result.analytic = false;

  const Challenge first =
      generate_challenge(pick_random_template(templates, rng), rng, clock, tokens);
  store.store(first.solution);
  const bots::Move human =
      bots::choose(StrategyName::oracle, first.spec, &first.solution, rng);
  const AttemptPayload captured{first.spec.challenge_id, {human.press, 0},
                                {human.release, 0}};
  (void)adjudicate_offline(store, captured, clock.now());

  for (std::uint64_t i = 0; i < trials; ++i) {
    const Challenge c =
        generate_challenge(pick_random_template(templates, rng), rng, clock, tokens);
    store.store(c.solution);
    const Verdict v = adjudicate_offline(store, captured, clock.now());
    ++result.verdicts[v];
    if (v == Verdict::correct) ++result.successes;
  }
  return result;
}

std::string format_rate(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string_view to_string(StrategyName s) {
  switch (s) {
    case StrategyName::uniform_random: return "uniform_random";
    case StrategyName::object_aware: return "object_aware";
    case StrategyName::goal_aware: return "goal_aware";
    case StrategyName::replay: return "replay";
    case StrategyName::oracle: return "oracle";
  }
  return "unknown";
}

AttackStrategy make_strategy(const std::string& name,
                             std::map<std::string, std::string> parameters) {
  AttackStrategy s;
  bool found = false;
  for (StrategyName n : {StrategyName::uniform_random, StrategyName::object_aware,
                         StrategyName::goal_aware, StrategyName::replay,
                         StrategyName::oracle}) {
    if (to_string(n) == name) {
      s.name = n;
      found = true;
    }
  }
  if (!found) throw UnknownStrategy(name);
  for (const auto& [key, value] : parameters) {
    if (key == "delay_ms") {
      if (value.empty() ||
          !std::all_of(value.begin(), value.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
          value.size() > 9) {
        throw std::invalid_argument("delay_ms must be a non-negative integer");
      }
    } else if (key == "capture" && s.name == StrategyName::replay) {
      if (value.empty()) throw std::invalid_argument("capture needs a file path");
    } else {
      throw std::invalid_argument("strategy " + name + " does not accept parameter '" + key + "'");
    }
  }
  s.parameters = std::move(parameters);
  return s;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  Interval out{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  // Guard the containment invariant against rounding at the extremes.
  out.low = std::min(out.low, p);
  out.high = std::max(out.high, p);
  if (successes == 0) out.low = 0.0;
  if (successes == trials) out.high = 1.0;
  return out;
}

std::optional<double> analytic_success_probability(const ChallengeSpec& spec,
                                                   const ChallengeSolution& solution,
                                                   const AttackStrategy& strategy) {
  const double canvas = static_cast<double>(spec.canvas.width) * spec.canvas.height;
  const double goal = static_cast<double>(solution.goal_region.area()) / canvas;
  const double target = static_cast<double>(solution.target_region.area()) / canvas;
  const auto k = static_cast<double>(std::count_if(
      spec.objects.begin(), spec.objects.end(),
      [](const SceneObject& o) { return o.kind == ObjectKind::draggable; }));
  switch (strategy.name) {
    case StrategyName::uniform_random: return target * goal;
    case StrategyName::object_aware: return goal / k;
    case StrategyName::goal_aware: return 1.0 / k;
    case StrategyName::replay:
    case StrategyName::oracle: return std::nullopt;
  }
  return std::nullopt;
}

AttackReport run_attack(const AttackStrategy& strategy,
                        const std::vector<GameTemplate>& templates,
                        std::uint64_t trials, std::uint64_t seed,
                        const AttackOptions& options) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (templates.empty()) throw EmptyTemplateSet();

  std::vector<PartitionResult> parts;
  if (strategy.name == StrategyName::replay) {
    parts.push_back(run_replay(templates, trials, seed));
  } else {
    const std::uint64_t n_parts = (trials + kPartitionTrials - 1) / kPartitionTrials;
    parts.resize(n_parts);
    unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
    workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, n_parts));
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](unsigned w) {
      try {
        for (std::uint64_t p = w; p < n_parts; p += workers) {
          const std::uint64_t begin = p * kPartitionTrials;
          parts[p] = run_partition(strategy, templates, begin,
                                   std::min(trials, begin + kPartitionTrials), seed, p);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  AttackReport report;
  report.strategy = strategy;
  report.trials = trials;
  report.seed = seed;
  double analytic_sum = 0.0;
  bool analytic = true;
  for (const auto& p : parts) {
    report.successes += p.successes;
    analytic_sum += p.analytic_sum;
    analytic = analytic && p.analytic;
    for (const auto& [v, n] : p.verdicts) report.verdicts[v] += n;
  }
  report.empirical_rate = static_cast<double>(report.successes) / static_cast<double>(trials);
  if (analytic) report.analytic_rate = analytic_sum / static_cast<double>(trials);
  report.wilson_95 = wilson_interval(report.successes, trials);
  return report;
}

namespace {

const std::vector<std::string> kGridKeys = {"draggables",   "distractors",
                                            "goal_width",   "goal_height",
                                            "object_width", "object_height",
                                            "min_gap"};

}  // namespace

ParameterGrid parse_grid(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object() || doc.empty()) {
    throw ParseError("sweep grid must be a non-empty object of integer arrays");
  }
  ParameterGrid grid;
  for (const auto& [key, values] : doc.items()) {
    if (std::find(kGridKeys.begin(), kGridKeys.end(), key) == kGridKeys.end()) {
      throw ParseError("unknown sweep parameter '" + key + "'");
    }
    if (!values.is_array() || values.empty()) {
      throw ParseError("sweep parameter '" + key + "' needs a non-empty array");
    }
    std::vector<int> vs;
    for (const auto& v : values) {
      if (!v.is_number_integer()) throw ParseError("sweep values must be integers");
      vs.push_back(v.get<int>());
    }
    grid.emplace_back(key, std::move(vs));
  }
  if (doc.contains("draggables") && doc.contains("distractors")) {
    throw ParseError("draggables and distractors are mutually exclusive");
  }
  return grid;
}

ParameterGrid default_sweep_grid() {
  return {{"draggables", {2, 3, 4, 5, 6}}, {"goal_width", {50, 100, 200}}};
}

GameTemplate apply_overrides(GameTemplate t, const std::map<std::string, int>& point) {
  for (const auto& [key, v] : point) {
    if (key == "draggables") {
      t.distractor_count_range = {v - 1, v - 1};
    } else if (key == "distractors") {
      t.distractor_count_range = {v, v};
    } else if (key == "goal_width") {
      t.goal_size.width = v;
    } else if (key == "goal_height") {
      t.goal_size.height = v;
    } else if (key == "object_width") {
      t.object_size.width = v;
    } else if (key == "object_height") {
      t.object_size.height = v;
    } else if (key == "min_gap") {
      t.min_gap = v;
    } else {
      throw std::invalid_argument("unknown sweep parameter '" + key + "'");
    }
  }
  validate(t);
  return t;
}

std::vector<SweepRow> sweep(const AttackStrategy& strategy,
                            const std::vector<GameTemplate>& templates,
                            std::uint64_t trials, const ParameterGrid& grid,
                            std::uint64_t seed, const AttackOptions& options) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  std::vector<SweepRow> rows;
  std::vector<std::size_t> idx(grid.size(), 0);
  while (true) {
    std::map<std::string, int> point;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      point[grid[i].first] = grid[i].second[idx[i]];
    }
    std::vector<GameTemplate> adjusted;
    adjusted.reserve(templates.size());
    for (const auto& t : templates) adjusted.push_back(apply_overrides(t, point));
    rows.push_back({point, run_attack(strategy, adjusted, trials, seed, options)});

    // Odometer over the grid, last key fastest.
    std::size_t i = grid.size();
    while (i > 0) {
      --i;
      if (++idx[i] < grid[i].second.size()) break;
      idx[i] = 0;
      if (i == 0) return rows;
    }
  }
}

namespace {

void write_row(std::ostream& out, const AttackReport& r) {
  out << to_string(r.strategy.name) << ',' << r.trials << ',' << r.successes << ','
      << format_rate(r.empirical_rate) << ','
      << (r.analytic_rate ? format_rate(*r.analytic_rate) : std::string()) << ','
      << format_rate(r.wilson_95.low) << ',' << format_rate(r.wilson_95.high) << ','
      << r.seed;
}

}  // namespace

void write_report_csv(std::ostream& out, const std::vector<AttackReport>& reports) {
  out << kReportCsvHeader << '\n';
  for (const auto& r : reports) {
    write_row(out, r);
    out << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const ParameterGrid& grid,
                     const std::vector<SweepRow>& rows) {
  out << kReportCsvHeader;
  for (const auto& [key, _] : grid) out << ',' << key;
  out << '\n';
  for (const auto& row : rows) {
    write_row(out, row.report);
    for (const auto& [key, _] : grid) out << ',' << row.point.at(key);
    out << '\n';
  }
}

}  // namespace gcaptcha
