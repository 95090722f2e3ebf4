#include <doctest.h>

#include <atomic>
#include <thread>

#include "gcaptcha/session.hpp"

using namespace gcaptcha;

namespace {

const WallTime kT0 = from_epoch_ms(1'700'000'000'000);

ChallengeSolution solution(const std::string& id, WallTime issued = kT0) {
  ChallengeSolution s;
  s.challenge_id = id;
  s.target_object_id = "t";
  s.target_region = {0, 0, 10, 10};
  s.goal_region = {50, 50, 10, 10};
  s.issued_at = issued;
  s.ttl = seconds{120};
  return s;
}

}  // namespace

TEST_CASE("consume yields the solution exactly once") {
  SessionStore store;
  store.store(solution("a"));
  CHECK(store.size() == 1);
  auto first = store.consume("a", kT0 + seconds{3});
  REQUIRE(std::holds_alternative<ChallengeSolution>(first));
  CHECK(std::get<ChallengeSolution>(first).challenge_id == "a");
  CHECK(std::holds_alternative<Replayed>(store.consume("a", kT0 + seconds{4})));
  CHECK(std::holds_alternative<Unknown>(store.consume("zzz", kT0)));
  CHECK_THROWS_AS(store.store(solution("a")), DuplicateChallengeId);
}

TEST_CASE("expiry boundary and burned ids") {
  SessionStore store;
  store.store(solution("a"));
  store.store(solution("b"));
  CHECK(std::holds_alternative<ChallengeSolution>(store.consume("a", kT0 + seconds{120})));
  CHECK(std::holds_alternative<Expired>(store.consume("b", kT0 + seconds{120} + milliseconds{1})));
  // An expired id is burned; asking again is a replay of a dead challenge.
  const auto again = store.consume("b", kT0 + seconds{121});
  CHECK_FALSE(std::holds_alternative<ChallengeSolution>(again));
}

TEST_CASE("peek does not consume") {
  SessionStore store;
  store.store(solution("a"));
  REQUIRE(store.peek("a").has_value());
  CHECK(std::holds_alternative<ChallengeSolution>(store.consume("a", kT0)));
  CHECK_FALSE(store.peek("missing").has_value());
}

TEST_CASE("eviction keeps tombstones for one ttl") {
  SessionStore store;
  store.store(solution("a"));
  CHECK(store.evict_expired(kT0 + seconds{200}) == 0);
  CHECK(std::holds_alternative<Expired>(store.consume("a", kT0 + seconds{200})));
  CHECK(store.evict_expired(kT0 + seconds{241}) == 1);
  CHECK(store.size() == 0);
  CHECK(std::holds_alternative<Unknown>(store.consume("a", kT0 + seconds{241})));
}

TEST_CASE("concurrent consumers: exactly one winner") {
  for (int round = 0; round < 20; ++round) {
    SessionStore store;
    store.store(solution("x"));
    std::atomic<int> winners{0};
    std::atomic<int> replays{0};
    std::atomic<bool> go{false};
    std::vector<std::thread> threads;
    for (int i = 0; i < 64; ++i) {
      threads.emplace_back([&] {
        while (!go.load()) std::this_thread::yield();
        const auto r = store.consume("x", kT0 + seconds{1});
        if (std::holds_alternative<ChallengeSolution>(r)) ++winners;
        if (std::holds_alternative<Replayed>(r)) ++replays;
      });
    }
    go = true;
    for (auto& t : threads) t.join();
    CHECK(winners == 1);
    CHECK(replays == 63);
  }
}

TEST_CASE("rate limiter examples") {
  RateLimiter rl;
  const RateLimitPolicy p{seconds{60}, 30, 10};
  CHECK(rl.check_rate("ip", RateKind::failure, p, kT0) == RateDecision::allowed);
  for (int i = 1; i < 10; ++i) {
    CHECK(rl.check_rate("ip", RateKind::failure, p, kT0 + seconds{i}) == RateDecision::allowed);
  }
  CHECK(rl.check_rate("ip", RateKind::failure, p, kT0 + seconds{10}) == RateDecision::rate_limited);
  // Other keys and kinds are independent.
  CHECK(rl.check_rate("other", RateKind::failure, p, kT0 + seconds{10}) == RateDecision::allowed);
  CHECK(rl.check_rate("ip", RateKind::issue, p, kT0 + seconds{10}) == RateDecision::allowed);
  // The first event leaves the half-open window exactly 60 s later.
  CHECK(rl.check_rate("ip", RateKind::failure, p, kT0 + seconds{59}) == RateDecision::rate_limited);
  CHECK(rl.check_rate("ip", RateKind::failure, p, kT0 + seconds{60}) == RateDecision::allowed);
  CHECK(rl.count("ip", RateKind::failure, p, kT0 + seconds{60}) == 10);
}

TEST_CASE("rate limiter agrees with a brute-force recount") {
  Rng rng(8);
  const RateLimitPolicy p{seconds{10}, 5, 3};
  RateLimiter rl;
  std::vector<std::pair<int, std::int64_t>> recorded;  // (key, ms)
  std::int64_t now = 0;
  for (int i = 0; i < 5000; ++i) {
    now += static_cast<std::int64_t>(rng.below(1500));
    const int key = static_cast<int>(rng.below(3));
    std::size_t in_window = 0;
    for (const auto& [k, t] : recorded) {
      if (k == key && t > now - 10'000 && t <= now) ++in_window;
    }
    const bool expect_allowed = in_window + 1 <= 5;
    const auto got = rl.check_rate(std::to_string(key), RateKind::issue, p, kT0 + milliseconds{now});
    CHECK((got == RateDecision::allowed) == expect_allowed);
    if (expect_allowed) recorded.emplace_back(key, now);
  }
}

TEST_CASE("token ledger redeems once before expiry") {
  TokenLedger ledger;
  ledger.issue("tok", kT0, seconds{60});
  ledger.issue("late", kT0, seconds{60});
  CHECK(ledger.redeem("tok", kT0 + seconds{59}));
  CHECK_FALSE(ledger.redeem("tok", kT0 + seconds{59}));
  CHECK_FALSE(ledger.redeem("late", kT0 + seconds{60} + milliseconds{1}));
  CHECK_FALSE(ledger.redeem("never", kT0));
  ledger.issue("old", kT0, seconds{1});
  CHECK(ledger.evict_expired(kT0 + seconds{120}) >= 1);
}
