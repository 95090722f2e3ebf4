#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gcaptcha/clock.hpp"
#include "gcaptcha/geometry.hpp"
#include "gcaptcha/rng.hpp"

namespace gcaptcha {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string template_id, std::string field,
                  const std::string& message)
      : std::runtime_error("template '" + template_id + "' field '" + field +
                           "': " + message),
        template_id_(std::move(template_id)),
        field_(std::move(field)) {}

  [[nodiscard]] const std::string& template_id() const { return template_id_; }
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string template_id_;
  std::string field_;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyTemplateSet : public std::runtime_error {
 public:
  EmptyTemplateSet() : std::runtime_error("template set is empty") {}
};

struct CountRange {
  int min = 0;
  int max = 0;

  friend bool operator==(const CountRange&, const CountRange&) = default;
};

struct GameTemplate {
  std::string template_id;
  CanvasSize canvas{400, 300};
  std::string target_class;
  std::vector<std::string> distractor_classes;
  std::string goal_class;
  CountRange distractor_count_range{2, 4};
  Size object_size{40, 40};
  Size goal_size{100, 80};
  std::int32_t min_gap = 8;
  std::map<std::string, std::string> sprite_refs;

  friend bool operator==(const GameTemplate&, const GameTemplate&) = default;
};

// Throws ValidationError naming the first violated field.
void validate(const GameTemplate& t);

// Sprite and class identifiers share this alphabet: [a-z0-9_]+.
[[nodiscard]] bool is_identifier(std::string_view s);

enum class ObjectKind { draggable, goal, decoration };

[[nodiscard]] std::string_view to_string(ObjectKind kind);

struct SceneObject {
  std::string object_id;
  ObjectKind kind = ObjectKind::draggable;
  std::string class_label;
  std::string sprite_ref;
  Region region;

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

// Client-visible scene. Carries nothing that singles out the target.
struct ChallengeSpec {
  std::string challenge_id;
  CanvasSize canvas;
  std::vector<SceneObject> objects;
  WallTime issued_at;
  seconds ttl{120};

  friend bool operator==(const ChallengeSpec&, const ChallengeSpec&) = default;
};

// Server-held answer key.
struct ChallengeSolution {
  std::string challenge_id;
  std::string target_object_id;
  Region target_region;
  Region goal_region;
  WallTime issued_at;
  seconds ttl{120};
  bool consumed = false;

  [[nodiscard]] WallTime expires_at() const { return issued_at + ttl; }

  friend bool operator==(const ChallengeSolution&,
                         const ChallengeSolution&) = default;
};

struct Challenge {
  ChallengeSpec spec;
  ChallengeSolution solution;
};

inline constexpr seconds kDefaultChallengeTtl{120};

// Parses one template document. Unknown keys are rejected.
[[nodiscard]] GameTemplate parse_template(std::string_view json_text);

// Loads every *.json file in the directory, ordered by filename.
[[nodiscard]] std::vector<GameTemplate> load_templates(
    const std::filesystem::path& dir);

struct GenerationOptions {
  seconds ttl = kDefaultChallengeTtl;
  int max_retries = kDefaultPlacementRetries;
};

// Layout comes from rng; ids come from tokens. Both must be seeded for a
// reproducible challenge.
[[nodiscard]] Challenge generate_challenge(const GameTemplate& t, Rng& rng,
                                           const Clock& clock,
                                           TokenSource& tokens,
                                           const GenerationOptions& opts = {});

[[nodiscard]] const GameTemplate& pick_random_template(
    const std::vector<GameTemplate>& templates, Rng& rng);

namespace detail {
// Generation with the target slot chosen by the caller instead of drawn from
// rng. The rng stream consumed is identical either way.
[[nodiscard]] Challenge generate_with_target_slot(
    const GameTemplate& t, Rng& rng, const Clock& clock, TokenSource& tokens,
    const GenerationOptions& opts, std::optional<std::size_t> target_slot);
}  // namespace detail

}  // namespace gcaptcha
