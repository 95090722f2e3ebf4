#include "gcaptcha/json_codec.hpp"

namespace gcaptcha {

json to_json(const Region& r) {
  return {{"x", r.x}, {"y", r.y}, {"width", r.width}, {"height", r.height}};
}

json to_json(const Size& s) {
  return {{"width", s.width}, {"height", s.height}};
}

json to_json(const TimedPoint& p) {
  return {{"x", p.point.x}, {"y", p.point.y}, {"t", p.t_ms}};
}

json to_json(const SceneObject& o) {
  return {{"object_id", o.object_id},
          {"kind", std::string(to_string(o.kind))},
          {"class_label", o.class_label},
          {"sprite_ref", o.sprite_ref},
          {"region", to_json(o.region)}};
}

json to_json(const ChallengeSpec& spec) {
  json objects = json::array();
  for (const auto& o : spec.objects) objects.push_back(to_json(o));
  return {{"challenge_id", spec.challenge_id},
          {"canvas", to_json(spec.canvas)},
          {"objects", std::move(objects)},
          {"issued_at", to_epoch_ms(spec.issued_at)},
          {"ttl", spec.ttl.count()}};
}

json to_json(const GameTemplate& t) {
  json sprites = json::object();
  for (const auto& [cls, ref] : t.sprite_refs) sprites[cls] = ref;
  return {{"template_id", t.template_id},
          {"canvas", to_json(t.canvas)},
          {"target_class", t.target_class},
          {"distractor_classes", t.distractor_classes},
          {"goal_class", t.goal_class},
          {"distractor_count_range",
           {t.distractor_count_range.min, t.distractor_count_range.max}},
          {"object_size", to_json(t.object_size)},
          {"goal_size", to_json(t.goal_size)},
          {"min_gap", t.min_gap},
          {"sprite_refs", std::move(sprites)}};
}

}  // namespace gcaptcha

namespace gcaptcha {

namespace {

std::int32_t as_i32(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key) || !doc[key].is_number_integer()) {
    throw ParseError(std::string("expected integer field ") + key);
  }
  return doc[key].get<std::int32_t>();
}

std::string as_str(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key) || !doc[key].is_string()) {
    throw ParseError(std::string("expected string field ") + key);
  }
  return doc[key].get<std::string>();
}

}  // namespace

ChallengeSpec parse_challenge_spec(const json& doc) {
  ChallengeSpec spec;
  spec.challenge_id = as_str(doc, "challenge_id");
  if (!doc.contains("canvas")) throw ParseError("missing canvas");
  spec.canvas = {as_i32(doc["canvas"], "width"), as_i32(doc["canvas"], "height")};
  if (!doc.contains("objects") || !doc["objects"].is_array()) {
    throw ParseError("objects must be an array");
  }
  for (const auto& o : doc["objects"]) {
    SceneObject obj;
    obj.object_id = as_str(o, "object_id");
    const std::string kind = as_str(o, "kind");
    if (kind == "draggable") {
      obj.kind = ObjectKind::draggable;
    } else if (kind == "goal") {
      obj.kind = ObjectKind::goal;
    } else if (kind == "decoration") {
      obj.kind = ObjectKind::decoration;
    } else {
      throw ParseError("unknown object kind " + kind);
    }
    obj.class_label = as_str(o, "class_label");
    obj.sprite_ref = as_str(o, "sprite_ref");
    if (!o.contains("region")) throw ParseError("missing region");
    const json& r = o["region"];
    obj.region = {as_i32(r, "x"), as_i32(r, "y"), as_i32(r, "width"), as_i32(r, "height")};
    spec.objects.push_back(std::move(obj));
  }
  if (!doc.contains("issued_at") || !doc["issued_at"].is_number_integer()) {
    throw ParseError("issued_at must be an integer");
  }
  spec.issued_at = from_epoch_ms(doc["issued_at"].get<std::int64_t>());
  spec.ttl = seconds{as_i32(doc, "ttl")};
  return spec;
}

}  // namespace gcaptcha
