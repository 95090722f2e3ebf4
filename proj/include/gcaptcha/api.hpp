#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcaptcha/challenge.hpp"
#include "gcaptcha/clock.hpp"
#include "gcaptcha/rng.hpp"
#include "gcaptcha/session.hpp"
#include "gcaptcha/verifier.hpp"

namespace gcaptcha {

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Sprite files indexed once at startup. Lookups never touch the filesystem,
// so a request name can only ever resolve to a file that was listed here.
class AssetCatalog {
 public:
  struct Asset {
    std::string content_type;
    std::string bytes;
  };

  AssetCatalog() = default;
  static AssetCatalog load(const std::filesystem::path& dir);

  void add(std::string name, Asset asset);
  [[nodiscard]] const Asset* find(std::string_view name) const;
  [[nodiscard]] std::size_t size() const { return assets_.size(); }

 private:
  std::map<std::string, Asset, std::less<>> assets_;
};

struct ServiceOptions {
  TimingPolicy timing;
  RateLimitPolicy rate;
  seconds challenge_ttl = kDefaultChallengeTtl;
  seconds token_ttl{60};
  // Present only in deterministic test mode.
  std::optional<std::uint64_t> seed;
};

// Transport-independent request handling for the challenge protocol. Every
// method is safe to call concurrently.
class CaptchaService {
 public:
  CaptchaService(std::vector<GameTemplate> templates, AssetCatalog assets,
                 const Clock& clock, ServiceOptions options);

  ApiResponse issue_challenge(const std::string& client_key);
  ApiResponse answer(std::string_view challenge_id, std::string_view body,
                     const std::string& client_key);
  [[nodiscard]] ApiResponse asset(std::string_view sprite_ref) const;
  ApiResponse verify_token(std::string_view token);

  [[nodiscard]] const SessionStore& sessions() const { return sessions_; }
  [[nodiscard]] const ServiceOptions& options() const { return options_; }
  [[nodiscard]] bool has_templates() const { return !templates_.empty(); }

 private:
  // Generates and stores a challenge; no rate accounting.
  Challenge new_challenge();
  std::string new_token();

  std::vector<GameTemplate> templates_;
  AssetCatalog assets_;
  const Clock& clock_;
  ServiceOptions options_;
  SessionStore sessions_;
  TokenLedger tokens_;
  RateLimiter limiter_;

  std::mutex rng_mu_;
  std::uint64_t challenge_counter_ = 0;
  std::unique_ptr<TokenSource> token_source_;
};

[[nodiscard]] ApiResponse error_response(int status, std::string_view code,
                                         std::string_view message);

// Strict AttemptPayload decoding; throws ParseError with a reason.
[[nodiscard]] AttemptPayload parse_attempt(std::string_view body);
[[nodiscard]] std::string encode_attempt(const AttemptPayload& attempt);

[[nodiscard]] bool is_token_format(std::string_view id);

}  // namespace gcaptcha
