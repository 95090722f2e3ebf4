#pragma once

#include <optional>
#include <string_view>

#include "gcaptcha/challenge.hpp"
#include "gcaptcha/clock.hpp"
#include "gcaptcha/geometry.hpp"

namespace gcaptcha {

struct AttemptPayload {
  std::string challenge_id;
  TimedPoint press;
  TimedPoint release;
};

enum class Verdict { correct, wrong, expired, replayed, too_fast, rate_limited };

[[nodiscard]] std::string_view to_string(Verdict v);

struct VerificationResult {
  Verdict verdict = Verdict::wrong;
  std::optional<std::int64_t> elapsed_ms;
};

enum class GoalResult { correct, wrong };

// Drag-endpoint adjudication: the press must land on the target object and
// the release inside the goal. Nothing between the two is inspected.
[[nodiscard]] constexpr GoalResult verify_goal(const Region& target_region,
                                               const Region& goal_region,
                                               Point press, Point release) {
  if (!contains(target_region, press)) {
    return GoalResult::wrong;
  }
  if (contains(goal_region, release)) {
    return GoalResult::correct;
  }
  return GoalResult::wrong;
}

[[nodiscard]] constexpr GoalResult verify_goal(const ChallengeSolution& s,
                                               Point press, Point release) {
  return verify_goal(s.target_region, s.goal_region, press, release);
}

struct TimingPolicy {
  milliseconds min_plausible{500};
  milliseconds max_session{120'000};

  [[nodiscard]] bool valid() const {
    return milliseconds{0} < min_plausible && min_plausible < max_session;
  }
};

enum class TimingClass { plausible, too_fast, expired_window };

// Server wall-clock elapsed time between issuing the scene and receiving the
// answer, clamped at zero. Client-reported timestamps play no part.
[[nodiscard]] inline milliseconds elapsed_time(WallTime displayed_at,
                                               WallTime received_at) {
  const auto d = received_at - displayed_at;
  return d < milliseconds{0} ? milliseconds{0} : d;
}

[[nodiscard]] constexpr TimingClass classify_timing(milliseconds elapsed,
                                                    const TimingPolicy& p) {
  if (elapsed < p.min_plausible) return TimingClass::too_fast;
  if (elapsed > p.max_session) return TimingClass::expired_window;
  return TimingClass::plausible;
}

// Timing gate followed by geometry, for an already-consumed solution.
[[nodiscard]] VerificationResult adjudicate(const ChallengeSolution& s,
                                            const AttemptPayload& attempt,
                                            WallTime received_at,
                                            const TimingPolicy& policy);

}  // namespace gcaptcha
