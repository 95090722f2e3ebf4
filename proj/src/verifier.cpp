#include "gcaptcha/verifier.hpp"

namespace gcaptcha {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::correct: return "correct";
    case Verdict::wrong: return "wrong";
    case Verdict::expired: return "expired";
    case Verdict::replayed: return "replayed";
    case Verdict::too_fast: return "too_fast";
    case Verdict::rate_limited: return "rate_limited";
  }
  return "unknown";
}

VerificationResult adjudicate(const ChallengeSolution& s,
                              const AttemptPayload& attempt,
                              WallTime received_at, const TimingPolicy& policy) {
  const milliseconds elapsed = elapsed_time(s.issued_at, received_at);
  switch (classify_timing(elapsed, policy)) {
    case TimingClass::too_fast:
      return {Verdict::too_fast, elapsed.count()};
    case TimingClass::expired_window:
      return {Verdict::expired, std::nullopt};
    case TimingClass::plausible:
      break;
  }
  const auto geometry =
      verify_goal(s, attempt.press.point, attempt.release.point);
  return {geometry == GoalResult::correct ? Verdict::correct : Verdict::wrong,
          elapsed.count()};
}

}  // namespace gcaptcha
