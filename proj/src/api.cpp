#include "gcaptcha/api.hpp"

#include <fstream>
#include <sstream>

#include "gcaptcha/json_codec.hpp"

namespace gcaptcha {

namespace {

std::string content_type_for(const std::filesystem::path& ext) {
  if (ext == ".png") return "image/png";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".gif") return "image/gif";
  if (ext == ".webp") return "image/webp";
  return {};
}

ApiResponse json_response(int status, const json& body) {
  return {status, "application/json", body.dump()};
}

std::int64_t get_coord(const json& obj, const char* key, const char* where) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    throw ParseError(std::string(where) + "." + key + " must be an integer");
  }
  const auto v = obj[key].get<std::int64_t>();
  if (v < 0) throw ParseError(std::string(where) + "." + key + " must be >= 0");
  return v;
}

TimedPoint get_timed_point(const json& doc, const char* where) {
  if (!doc.contains(where) || !doc[where].is_object()) {
    throw ParseError(std::string(where) + " must be an object");
  }
  const json& p = doc[where];
  for (const auto& [key, _] : p.items()) {
    if (key != "x" && key != "y" && key != "t") {
      throw ParseError(std::string(where) + ": unknown key " + key);
    }
  }
  const auto x = get_coord(p, "x", where);
  const auto y = get_coord(p, "y", where);
  if (x > INT32_MAX || y > INT32_MAX) {
    throw ParseError(std::string(where) + " coordinate out of range");
  }
  return {{static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)},
          get_coord(p, "t", where)};
}

}  // namespace

AssetCatalog AssetCatalog::load(const std::filesystem::path& dir) {
  AssetCatalog catalog;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto& path = entry.path();
    const std::string name = path.stem().string();
    const std::string type = content_type_for(path.extension());
    if (type.empty() || !is_identifier(name)) continue;
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    catalog.add(name, {type, buf.str()});
  }
  return catalog;
}

void AssetCatalog::add(std::string name, Asset asset) {
  assets_.insert_or_assign(std::move(name), std::move(asset));
}

const AssetCatalog::Asset* AssetCatalog::find(std::string_view name) const {
  const auto it = assets_.find(name);
  return it == assets_.end() ? nullptr : &it->second;
}

bool is_token_format(std::string_view id) {
  if (id.size() != kTokenBytes * 2) return false;
  for (char c : id) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

ApiResponse error_response(int status, std::string_view code,
                           std::string_view message) {
  return json_response(status, {{"error", code}, {"message", message}});
}

AttemptPayload parse_attempt(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error&) {
    throw ParseError("body is not valid JSON");
  }
  if (!doc.is_object()) throw ParseError("body must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "challenge_id" && key != "press" && key != "release") {
      throw ParseError("unknown key " + key);
    }
  }
  if (!doc.contains("challenge_id") || !doc["challenge_id"].is_string()) {
    throw ParseError("challenge_id must be a string");
  }
  AttemptPayload a;
  a.challenge_id = doc["challenge_id"].get<std::string>();
  a.press = get_timed_point(doc, "press");
  a.release = get_timed_point(doc, "release");
  if (a.release.t_ms < a.press.t_ms) {
    throw ParseError("release.t must be >= press.t");
  }
  return a;
}

std::string encode_attempt(const AttemptPayload& attempt) {
  const json doc = {{"challenge_id", attempt.challenge_id},
                    {"press", to_json(attempt.press)},
                    {"release", to_json(attempt.release)}};
  return doc.dump();
}

CaptchaService::CaptchaService(std::vector<GameTemplate> templates,
                               AssetCatalog assets, const Clock& clock,
                               ServiceOptions options)
    : templates_(std::move(templates)),
      assets_(std::move(assets)),
      clock_(clock),
      options_(options) {
  if (!options_.timing.valid()) {
    throw std::invalid_argument("timing policy requires 0 < min_plausible < max_session");
  }
  if (!options_.rate.valid()) {
    throw std::invalid_argument("rate limits must be positive");
  }
  for (const auto& t : templates_) validate(t);
  if (options_.seed) {
    token_source_ = std::make_unique<SeededTokenSource>(splitmix64(*options_.seed));
  } else {
    token_source_ = std::make_unique<SystemTokenSource>();
  }
}

std::string CaptchaService::new_token() {
  std::lock_guard lock(rng_mu_);
  return token_source_->hex_token(kTokenBytes);
}

Challenge CaptchaService::new_challenge() {
  Challenge c;
  {
    std::lock_guard lock(rng_mu_);
    // A fresh stream per challenge: observing one scene reveals nothing
    // about the generator state behind the next.
    Rng rng = options_.seed ? Rng::derive(*options_.seed, challenge_counter_++)
                            : Rng::from_entropy();
    const GameTemplate& t = pick_random_template(templates_, rng);
    c = generate_challenge(t, rng, clock_, *token_source_,
                           {options_.challenge_ttl, kDefaultPlacementRetries});
  }
  sessions_.store(c.solution);
  return c;
}

ApiResponse CaptchaService::issue_challenge(const std::string& client_key) {
  const WallTime now = clock_.now();
  if (limiter_.check_rate(client_key, RateKind::issue, options_.rate, now) ==
      RateDecision::rate_limited) {
    return error_response(429, "rate_limited", "too many challenges requested");
  }
  if (templates_.empty()) {
    return error_response(503, "no_templates", "no game templates are loaded");
  }
  try {
    return json_response(201, to_json(new_challenge().spec));
  } catch (const GenerationError& e) {
    return error_response(500, "generation_failed", e.what());
  }
}

ApiResponse CaptchaService::answer(std::string_view challenge_id,
                                   std::string_view body,
                                   const std::string& client_key) {
  if (!is_token_format(challenge_id)) {
    return error_response(400, "malformed_id", "challenge id must be 32 lowercase hex digits");
  }
  AttemptPayload attempt;
  try {
    attempt = parse_attempt(body);
  } catch (const ParseError& e) {
    return error_response(400, "malformed_body", e.what());
  }
  if (attempt.challenge_id != challenge_id) {
    return error_response(400, "id_mismatch", "body challenge_id differs from the path");
  }

  const WallTime now = clock_.now();
  const ConsumeOutcome outcome = sessions_.consume(attempt.challenge_id, now);

  VerificationResult result;
  if (std::holds_alternative<Unknown>(outcome)) {
    // Counts toward the failure budget; the 404 stands either way.
    (void)limiter_.check_rate(client_key, RateKind::failure, options_.rate, now);
    return error_response(404, "unknown_challenge", "no such challenge");
  } else if (std::holds_alternative<Replayed>(outcome)) {
    result.verdict = Verdict::replayed;
  } else if (std::holds_alternative<Expired>(outcome)) {
    result.verdict = Verdict::expired;
  } else {
    result = adjudicate(std::get<ChallengeSolution>(outcome), attempt, now,
                        options_.timing);
  }

  json doc = {{"verdict", std::string(to_string(result.verdict))}};
  if (result.elapsed_ms) doc["elapsed_ms"] = *result.elapsed_ms;

  if (result.verdict == Verdict::correct) {
    const std::string token = new_token();
    tokens_.issue(token, now, options_.token_ttl);
    doc["success_token"] = token;
    return json_response(200, doc);
  }

  if (limiter_.check_rate(client_key, RateKind::failure, options_.rate, now) ==
      RateDecision::rate_limited) {
    ApiResponse r = json_response(
        429, {{"error", "rate_limited"},
              {"message", "too many failed attempts"},
              {"verdict", std::string(to_string(Verdict::rate_limited))}});
    return r;
  }
  if (result.verdict != Verdict::replayed && !templates_.empty()) {
    try {
      doc["next_challenge"] = to_json(new_challenge().spec);
    } catch (const GenerationError&) {
      // The verdict still stands; the client can request a new challenge.
    }
  }
  return json_response(200, doc);
}

ApiResponse CaptchaService::asset(std::string_view sprite_ref) const {
  if (!is_identifier(sprite_ref)) {
    return error_response(400, "invalid_name", "sprite names must match [a-z0-9_]+");
  }
  const AssetCatalog::Asset* a = assets_.find(sprite_ref);
  if (a == nullptr) {
    return error_response(404, "unknown_sprite", "no such sprite");
  }
  return {200, a->content_type, a->bytes};
}

ApiResponse CaptchaService::verify_token(std::string_view token) {
  const bool valid =
      is_token_format(token) && tokens_.redeem(std::string(token), clock_.now());
  return json_response(200, {{"valid", valid}});
}

}  // namespace gcaptcha
