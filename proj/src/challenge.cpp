#include "gcaptcha/challenge.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "gcaptcha/json_codec.hpp"

namespace gcaptcha {

namespace {

const std::set<std::string> kTemplateKeys = {
    "template_id", "canvas",     "target_class",           "distractor_classes",
    "goal_class",  "object_size", "distractor_count_range", "goal_size",
    "min_gap",     "sprite_refs"};

std::string id_of(const json& doc) {
  if (doc.is_object() && doc.contains("template_id") &&
      doc["template_id"].is_string()) {
    return doc["template_id"].get<std::string>();
  }
  return "<unnamed>";
}

void require_keys(const json& obj, const std::set<std::string>& keys,
                  const std::string& tid, const std::string& where) {
  if (!obj.is_object()) {
    throw ValidationError(tid, where, "expected an object");
  }
  for (const auto& [key, _] : obj.items()) {
    if (!keys.contains(key)) {
      throw ValidationError(tid, where.empty() ? key : where + "." + key,
                            "unknown key");
    }
  }
  for (const auto& key : keys) {
    if (!obj.contains(key)) {
      throw ValidationError(tid, where.empty() ? key : where + "." + key,
                            "missing");
    }
  }
}

std::int32_t get_int(const json& v, const std::string& tid,
                     const std::string& field) {
  if (!v.is_number_integer()) {
    throw ValidationError(tid, field, "expected an integer");
  }
  const auto n = v.get<std::int64_t>();
  if (n < -1'000'000 || n > 1'000'000) {
    throw ValidationError(tid, field, "out of range");
  }
  return static_cast<std::int32_t>(n);
}

std::string get_string(const json& v, const std::string& tid,
                       const std::string& field) {
  if (!v.is_string()) throw ValidationError(tid, field, "expected a string");
  return v.get<std::string>();
}

Size get_size(const json& v, const std::string& tid, const std::string& field) {
  require_keys(v, {"width", "height"}, tid, field);
  return {get_int(v["width"], tid, field + ".width"),
          get_int(v["height"], tid, field + ".height")};
}

bool fits(Size s, CanvasSize c) {
  return s.width > 0 && s.height > 0 && s.width <= c.width &&
         s.height <= c.height;
}

}  // namespace

bool is_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string_view to_string(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::draggable: return "draggable";
    case ObjectKind::goal: return "goal";
    case ObjectKind::decoration: return "decoration";
  }
  return "unknown";
}

void validate(const GameTemplate& t) {
  const auto& id = t.template_id;
  if (id.empty()) throw ValidationError(id, "template_id", "empty");
  if (t.canvas.width <= 0 || t.canvas.height <= 0) {
    throw ValidationError(id, "canvas", "dimensions must be positive");
  }
  if (!is_identifier(t.target_class)) {
    throw ValidationError(id, "target_class", "must match [a-z0-9_]+");
  }
  if (!is_identifier(t.goal_class)) {
    throw ValidationError(id, "goal_class", "must match [a-z0-9_]+");
  }
  if (t.distractor_classes.empty()) {
    throw ValidationError(id, "distractor_classes", "empty");
  }
  for (const auto& c : t.distractor_classes) {
    if (!is_identifier(c)) {
      throw ValidationError(id, "distractor_classes", "'" + c + "' must match [a-z0-9_]+");
    }
    if (c == t.target_class) {
      throw ValidationError(id, "distractor_classes",
                            "contains the target class '" + c + "'");
    }
  }
  if (t.distractor_count_range.min < 1) {
    throw ValidationError(id, "distractor_count_range", "min must be >= 1");
  }
  if (t.distractor_count_range.max < t.distractor_count_range.min) {
    throw ValidationError(id, "distractor_count_range", "max must be >= min");
  }
  if (!fits(t.object_size, t.canvas)) {
    throw ValidationError(id, "object_size", "must be positive and fit the canvas");
  }
  if (!fits(t.goal_size, t.canvas)) {
    throw ValidationError(id, "goal_size", "must be positive and fit the canvas");
  }
  if (t.min_gap < 0) throw ValidationError(id, "min_gap", "must be >= 0");

  std::vector<std::string> classes = t.distractor_classes;
  classes.push_back(t.target_class);
  classes.push_back(t.goal_class);
  for (const auto& c : classes) {
    const auto it = t.sprite_refs.find(c);
    if (it == t.sprite_refs.end()) {
      throw ValidationError(id, "sprite_refs", "no sprite for class '" + c + "'");
    }
    if (!is_identifier(it->second)) {
      throw ValidationError(id, "sprite_refs", "sprite '" + it->second + "' must match [a-z0-9_]+");
    }
  }
}

GameTemplate parse_template(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  const std::string tid = id_of(doc);
  require_keys(doc, kTemplateKeys, tid, "");

  GameTemplate t;
  t.template_id = get_string(doc["template_id"], tid, "template_id");
  t.canvas = get_size(doc["canvas"], tid, "canvas");
  t.target_class = get_string(doc["target_class"], tid, "target_class");
  if (!doc["distractor_classes"].is_array()) {
    throw ValidationError(tid, "distractor_classes", "expected an array");
  }
  for (const auto& c : doc["distractor_classes"]) {
    t.distractor_classes.push_back(get_string(c, tid, "distractor_classes"));
  }
  t.goal_class = get_string(doc["goal_class"], tid, "goal_class");
  const auto& range = doc["distractor_count_range"];
  if (!range.is_array() || range.size() != 2) {
    throw ValidationError(tid, "distractor_count_range", "expected [min, max]");
  }
  t.distractor_count_range = {get_int(range[0], tid, "distractor_count_range"),
                              get_int(range[1], tid, "distractor_count_range")};
  t.object_size = get_size(doc["object_size"], tid, "object_size");
  t.goal_size = get_size(doc["goal_size"], tid, "goal_size");
  t.min_gap = get_int(doc["min_gap"], tid, "min_gap");
  if (!doc["sprite_refs"].is_object()) {
    throw ValidationError(tid, "sprite_refs", "expected an object");
  }
  for (const auto& [cls, ref] : doc["sprite_refs"].items()) {
    t.sprite_refs[cls] = get_string(ref, tid, "sprite_refs." + cls);
  }
  validate(t);
  return t;
}

std::vector<GameTemplate> load_templates(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<GameTemplate> out;
  std::set<std::string> seen;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      out.push_back(parse_template(buf.str()));
    } catch (const ParseError& e) {
      throw ParseError(path.filename().string() + ": " + e.what());
    }
    if (!seen.insert(out.back().template_id).second) {
      throw ValidationError(out.back().template_id, "template_id", "duplicate");
    }
  }
  return out;
}

namespace detail {

Challenge generate_with_target_slot(const GameTemplate& t, Rng& rng,
                                    const Clock& clock, TokenSource& tokens,
                                    const GenerationOptions& opts,
                                    std::optional<std::size_t> target_slot) {
  const auto distractors = static_cast<std::size_t>(
      rng.between(t.distractor_count_range.min, t.distractor_count_range.max));
  const std::size_t draggables = distractors + 1;

  // Slot 0 is the goal; slots 1..k are interchangeable draggables, so the
  // layout is independent of which slot becomes the target.
  std::vector<Size> sizes;
  sizes.reserve(draggables + 1);
  sizes.push_back(t.goal_size);
  sizes.insert(sizes.end(), draggables, t.object_size);

  std::vector<Region> regions;
  try {
    regions = place_non_overlapping(t.canvas, sizes, t.min_gap, rng, opts.max_retries);
  } catch (const PlacementFailure& e) {
    throw GenerationError("template '" + t.template_id + "': " + e.what());
  }

  const auto drawn_slot = static_cast<std::size_t>(rng.below(draggables));
  const std::size_t target = target_slot.value_or(drawn_slot);
  if (target >= draggables) {
    throw std::invalid_argument("target slot out of range");
  }

  std::vector<std::string> labels(draggables);
  for (std::size_t i = 0; i < draggables; ++i) {
    labels[i] = t.distractor_classes[rng.below(t.distractor_classes.size())];
  }
  labels[target] = t.target_class;

  Challenge c;
  c.spec.challenge_id = tokens.hex_token(kTokenBytes);
  c.spec.canvas = t.canvas;
  c.spec.issued_at = clock.now();
  c.spec.ttl = opts.ttl;

  SceneObject goal{tokens.hex_token(8), ObjectKind::goal, t.goal_class,
                   t.sprite_refs.at(t.goal_class), regions[0]};

  std::vector<SceneObject> movers;
  movers.reserve(draggables);
  for (std::size_t i = 0; i < draggables; ++i) {
    movers.push_back({tokens.hex_token(8), ObjectKind::draggable, labels[i],
                      t.sprite_refs.at(labels[i]), regions[i + 1]});
  }

  c.solution.challenge_id = c.spec.challenge_id;
  c.solution.target_object_id = movers[target].object_id;
  c.solution.target_region = movers[target].region;
  c.solution.goal_region = goal.region;
  c.solution.issued_at = c.spec.issued_at;
  c.solution.ttl = c.spec.ttl;

  rng.shuffle(movers.begin(), movers.end());
  c.spec.objects.reserve(draggables + 1);
  c.spec.objects.push_back(std::move(goal));
  for (auto& m : movers) c.spec.objects.push_back(std::move(m));
  return c;
}

}  // namespace detail

Challenge generate_challenge(const GameTemplate& t, Rng& rng,
                             const Clock& clock, TokenSource& tokens,
                             const GenerationOptions& opts) {
  return detail::generate_with_target_slot(t, rng, clock, tokens, opts,
                                           std::nullopt);
}

const GameTemplate& pick_random_template(
    const std::vector<GameTemplate>& templates, Rng& rng) {
  if (templates.empty()) throw EmptyTemplateSet();
  return templates[rng.below(templates.size())];
}

}  // namespace gcaptcha
