#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace gcaptcha {

// Seeded random source with platform-stable bounded draws.
// std::uniform_int_distribution is implementation-defined, which would make
// seeded scenes differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Fresh, unpredictable stream seeded from the OS entropy source.
  static Rng from_entropy();

  // Independent stream for (seed, index); used to partition work.
  static Rng derive(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      std::swap(first[i - 1], first[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Source of opaque lowercase-hex tokens (challenge ids, success tokens).
class TokenSource {
 public:
  virtual ~TokenSource() = default;
  virtual std::string hex_token(std::size_t bytes) = 0;
};

// Reads the OS cryptographic random device.
class SystemTokenSource final : public TokenSource {
 public:
  SystemTokenSource();
  std::string hex_token(std::size_t bytes) override;

 private:
  std::random_device device_;
};

// Deterministic tokens for seeded test mode only.
class SeededTokenSource final : public TokenSource {
 public:
  explicit SeededTokenSource(std::uint64_t seed) : rng_(seed) {}
  std::string hex_token(std::size_t bytes) override;

 private:
  Rng rng_;
};

inline constexpr std::size_t kTokenBytes = 16;

}  // namespace gcaptcha
