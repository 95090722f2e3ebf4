#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>

#include "gcaptcha/challenge.hpp"
#include "gcaptcha/clock.hpp"

namespace gcaptcha {

class DuplicateChallengeId : public std::runtime_error {
 public:
  explicit DuplicateChallengeId(const std::string& id)
      : std::runtime_error("duplicate challenge id " + id) {}
};

struct Expired {};
struct Replayed {};
struct Unknown {};

using ConsumeOutcome = std::variant<ChallengeSolution, Expired, Replayed, Unknown>;

// Outstanding challenges keyed by id. Each id yields its solution to exactly
// one consume() call, and only before issued_at + ttl.
class SessionStore {
 public:
  void store(ChallengeSolution solution);
  [[nodiscard]] ConsumeOutcome consume(const std::string& challenge_id,
                                       WallTime at);

  // Drops entries more than one ttl past their expiry; until then an expired
  // or consumed id still reports Expired/Replayed rather than Unknown.
  std::size_t evict_expired(WallTime at);
  [[nodiscard]] std::size_t size() const;

  // Diagnostic lookup that does not consume. Never reachable from the wire.
  [[nodiscard]] std::optional<ChallengeSolution> peek(
      const std::string& challenge_id) const;

 private:
  void evict_locked(WallTime at);

  mutable std::mutex mu_;
  std::unordered_map<std::string, ChallengeSolution> entries_;
  std::size_t stores_since_evict_ = 0;
};

// Single-use tokens with their own lifetime (success tokens).
class TokenLedger {
 public:
  void issue(const std::string& token, WallTime at, seconds ttl);
  // True exactly once per issued token, and only before it expires.
  [[nodiscard]] bool redeem(const std::string& token, WallTime at);
  std::size_t evict_expired(WallTime at);

 private:
  std::mutex mu_;
  std::unordered_map<std::string, WallTime> expiry_;
  std::size_t issues_since_evict_ = 0;
};

struct RateLimitPolicy {
  seconds window{60};
  int max_issues_per_window = 30;
  int max_failures_per_window = 10;

  [[nodiscard]] bool valid() const {
    return window > seconds{0} && max_issues_per_window > 0 &&
           max_failures_per_window > 0;
  }
};

enum class RateKind { issue, failure };
enum class RateDecision { allowed, rate_limited };

// Sliding window over (at - window, at]. An allowed event is recorded and
// counts against later checks; a rejected one is not recorded.
class RateLimiter {
 public:
  [[nodiscard]] RateDecision check_rate(const std::string& client_key,
                                        RateKind kind,
                                        const RateLimitPolicy& policy,
                                        WallTime at);
  // Events currently inside the window, without recording anything.
  [[nodiscard]] std::size_t count(const std::string& client_key, RateKind kind,
                                  const RateLimitPolicy& policy, WallTime at);

 private:
  using Key = std::pair<std::string, RateKind>;
  std::mutex mu_;
  std::map<Key, std::deque<WallTime>> events_;
  std::size_t checks_since_sweep_ = 0;
};

}  // namespace gcaptcha
