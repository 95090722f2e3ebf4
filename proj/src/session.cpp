#include "gcaptcha/session.hpp"

#include <algorithm>
#include <iterator>

namespace gcaptcha {

namespace {
constexpr std::size_t kEvictEvery = 256;
}

void SessionStore::store(ChallengeSolution solution) {
  std::lock_guard lock(mu_);
  if (++stores_since_evict_ >= kEvictEvery) {
    evict_locked(solution.issued_at);
    stores_since_evict_ = 0;
  }
  const auto id = solution.challenge_id;
  solution.consumed = false;
  if (!entries_.try_emplace(id, std::move(solution)).second) {
    throw DuplicateChallengeId(id);
  }
}

std::optional<ChallengeSolution> SessionStore::peek(
    const std::string& challenge_id) const {
  std::lock_guard lock(mu_);
  const auto it = entries_.find(challenge_id);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

ConsumeOutcome SessionStore::consume(const std::string& challenge_id,
                                     WallTime at) {
  std::lock_guard lock(mu_);
  const auto it = entries_.find(challenge_id);
  if (it == entries_.end()) return Unknown{};
  ChallengeSolution& s = it->second;
  if (s.consumed) return Replayed{};
  if (at > s.expires_at()) {
    // Burn it so a clock step backwards cannot resurrect the id.
    s.consumed = true;
    return Expired{};
  }
  s.consumed = true;
  return s;
}

void SessionStore::evict_locked(WallTime at) {
  std::erase_if(entries_, [at](const auto& kv) {
    return at > kv.second.expires_at() + kv.second.ttl;
  });
}

std::size_t SessionStore::evict_expired(WallTime at) {
  std::lock_guard lock(mu_);
  const auto before = entries_.size();
  evict_locked(at);
  return before - entries_.size();
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

void TokenLedger::issue(const std::string& token, WallTime at, seconds ttl) {
  std::lock_guard lock(mu_);
  if (++issues_since_evict_ >= kEvictEvery) {
    std::erase_if(expiry_, [at](const auto& kv) { return at > kv.second; });
    issues_since_evict_ = 0;
  }
  if (!expiry_.try_emplace(token, at + ttl).second) {
    throw DuplicateChallengeId(token);
  }
}

bool TokenLedger::redeem(const std::string& token, WallTime at) {
  std::lock_guard lock(mu_);
  const auto it = expiry_.find(token);
  if (it == expiry_.end()) return false;
  const bool live = at <= it->second;
  expiry_.erase(it);
  return live;
}

std::size_t TokenLedger::evict_expired(WallTime at) {
  std::lock_guard lock(mu_);
  return std::erase_if(expiry_, [at](const auto& kv) { return at > kv.second; });
}

namespace {

std::size_t trim(std::deque<WallTime>& q, WallTime at, seconds window) {
  while (!q.empty() && q.front() <= at - window) q.pop_front();
  return q.size();
}

}  // namespace

RateDecision RateLimiter::check_rate(const std::string& client_key,
                                     RateKind kind,
                                     const RateLimitPolicy& policy,
                                     WallTime at) {
  const auto limit = static_cast<std::size_t>(
      kind == RateKind::issue ? policy.max_issues_per_window
                              : policy.max_failures_per_window);
  std::lock_guard lock(mu_);
  if (++checks_since_sweep_ >= 4096) {
    std::erase_if(events_, [&](auto& kv) {
      return trim(kv.second, at, policy.window) == 0;
    });
    checks_since_sweep_ = 0;
  }
  auto& q = events_[{client_key, kind}];
  if (trim(q, at, policy.window) + 1 > limit) return RateDecision::rate_limited;
  // Keep the deque sorted if callers deliver slightly out-of-order times.
  q.insert(std::upper_bound(q.begin(), q.end(), at), at);
  return RateDecision::allowed;
}

std::size_t RateLimiter::count(const std::string& client_key, RateKind kind,
                               const RateLimitPolicy& policy, WallTime at) {
  std::lock_guard lock(mu_);
  const auto it = events_.find({client_key, kind});
  if (it == events_.end()) return 0;
  return trim(it->second, at, policy.window);
}

}  // namespace gcaptcha
