#pragma once

#include <atomic>
#include <chrono>

namespace gcaptcha {

using WallTime =
    std::chrono::time_point<std::chrono::system_clock, std::chrono::milliseconds>;
using std::chrono::milliseconds;
using std::chrono::seconds;

class Clock {
 public:
  virtual ~Clock() = default;
  [[nodiscard]] virtual WallTime now() const = 0;
};

class SystemClock final : public Clock {
 public:
  [[nodiscard]] WallTime now() const override {
    return std::chrono::time_point_cast<milliseconds>(
        std::chrono::system_clock::now());
  }
};

// Injected time for tests; advance() is safe to call from any thread.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(WallTime start = WallTime{milliseconds{1'700'000'000'000}})
      : now_ms_(start.time_since_epoch().count()) {}

  [[nodiscard]] WallTime now() const override {
    return WallTime{milliseconds{now_ms_.load()}};
  }
  void advance(milliseconds d) { now_ms_ += d.count(); }
  void set(WallTime t) { now_ms_ = t.time_since_epoch().count(); }

 private:
  std::atomic<std::int64_t> now_ms_;
};

[[nodiscard]] inline std::int64_t to_epoch_ms(WallTime t) {
  return t.time_since_epoch().count();
}
[[nodiscard]] inline WallTime from_epoch_ms(std::int64_t ms) {
  return WallTime{milliseconds{ms}};
}

}  // namespace gcaptcha
