#include "gcaptcha/rng.hpp"

#include <array>

namespace gcaptcha {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::from_entropy() {
  std::random_device device;
  std::array<std::uint32_t, 8> words{};
  for (auto& w : words) w = device();
  std::seed_seq seq(words.begin(), words.end());
  Rng rng(0);
  rng.engine_.seed(seq);
  return rng;
}

Rng Rng::derive(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ (index * 0xd1b54a32d192ed03ULL)));
}

// Lemire's multiply-shift rejection method.
std::uint64_t Rng::below(std::uint64_t bound) {
  std::uint64_t x = engine_();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = engine_();
      m = static_cast<unsigned __int128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

namespace {

constexpr char kHex[] = "0123456789abcdef";

template <typename NextByte>
std::string to_hex(std::size_t bytes, NextByte&& next) {
  std::string out;
  out.reserve(bytes * 2);
  for (std::size_t i = 0; i < bytes; ++i) {
    const auto b = static_cast<unsigned>(next()) & 0xffU;
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xfU]);
  }
  return out;
}

}  // namespace

SystemTokenSource::SystemTokenSource() : device_("/dev/urandom") {}

std::string SystemTokenSource::hex_token(std::size_t bytes) {
  return to_hex(bytes, [this] { return device_(); });
}

std::string SeededTokenSource::hex_token(std::size_t bytes) {
  return to_hex(bytes, [this] { return rng_.next() >> 56; });
}

}  // namespace gcaptcha
