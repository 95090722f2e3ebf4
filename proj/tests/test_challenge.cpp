#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gcaptcha/challenge.hpp"
#include "gcaptcha/json_codec.hpp"
#include "test_support.hpp"

using namespace gcaptcha;
using gcaptcha::testing::soccer_template;

namespace {

std::string soccer_text() {
  return gcaptcha::testing::read_file(gcaptcha::testing::template_dir() / "soccer.json");
}

std::string with_change(const std::string& key, const json& value) {
  json doc = json::parse(soccer_text());
  doc[key] = value;
  return doc.dump();
}

// Scene audit written against the wire document only.
void audit(const ChallengeSpec& spec, const ChallengeSolution& sol, const GameTemplate& t) {
  int goals = 0;
  int draggables = 0;
  int target_hits = 0;
  for (const auto& o : spec.objects) {
    CHECK(on_canvas(o.region, spec.canvas));
    if (o.kind == ObjectKind::goal) {
      ++goals;
      CHECK(o.region == sol.goal_region);
      CHECK(o.class_label == t.goal_class);
    }
    if (o.kind == ObjectKind::draggable) {
      ++draggables;
      if (o.object_id == sol.target_object_id) {
        ++target_hits;
        CHECK(o.region == sol.target_region);
        CHECK(o.class_label == t.target_class);
      } else {
        CHECK(o.class_label != t.target_class);
      }
    }
  }
  CHECK(goals == 1);
  CHECK(draggables >= 2);
  CHECK(target_hits == 1);
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.objects.size(); ++j) {
      CHECK(separated(spec.objects[i].region, spec.objects[j].region, t.min_gap));
    }
  }
  CHECK(contains(sol.target_region, sol.target_region.center()));
  CHECK_FALSE(overlaps(sol.target_region, sol.goal_region));
  CHECK(sol.challenge_id == spec.challenge_id);
}

}  // namespace

TEST_CASE("fixture templates load") {
  const auto templates = load_templates(gcaptcha::testing::template_dir());
  REQUIRE(templates.size() == 3);
  CHECK(templates[0].template_id == "basketball");
  CHECK(templates[2].template_id == "soccer");
  const GameTemplate& soccer = templates[2];
  CHECK(soccer.canvas == CanvasSize{400, 300});
  CHECK(soccer.object_size == Size{40, 40});
  CHECK(soccer.goal_size == Size{100, 80});
  CHECK(soccer.distractor_count_range == CountRange{2, 4});
}

TEST_CASE("template serialization round-trips") {
  const GameTemplate t = soccer_template();
  CHECK(parse_template(to_json(t).dump()) == t);
}

TEST_CASE("template validation errors name the field") {
  try {
    (void)parse_template(with_change("distractor_count_range", json::array({0, 2})));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.template_id() == "soccer");
    CHECK(e.field() == "distractor_count_range");
  }
  try {
    (void)parse_template(with_change("goal_size", {{"width", 500}, {"height", 80}}));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "goal_size");
  }
  CHECK_THROWS_AS((void)parse_template(with_change("distractor_count_range", json::array({3, 2}))),
                  ValidationError);
  CHECK_THROWS_AS((void)parse_template(with_change("distractor_classes", json::array({"soccer_ball"}))),
                  ValidationError);
  CHECK_THROWS_AS((void)parse_template(with_change("extra", 1)), ValidationError);
  CHECK_THROWS_AS((void)parse_template(with_change("min_gap", "8")), ValidationError);
  CHECK_THROWS_AS((void)parse_template("{not json"), ParseError);

  json missing = json::parse(soccer_text());
  missing.erase("goal_class");
  CHECK_THROWS_AS((void)parse_template(missing.dump()), ValidationError);

  json bad_sprite = json::parse(soccer_text());
  bad_sprite["sprite_refs"].erase("volleyball");
  CHECK_THROWS_AS((void)parse_template(bad_sprite.dump()), ValidationError);

  json nested = json::parse(soccer_text());
  nested["canvas"]["depth"] = 3;
  CHECK_THROWS_AS((void)parse_template(nested.dump()), ValidationError);
}

TEST_CASE("generate_challenge with two distractors, seed 7") {
  GameTemplate t = soccer_template();
  t.distractor_count_range = {2, 2};
  Rng rng(7);
  ManualClock clock;
  SeededTokenSource tokens(7);
  const Challenge c = generate_challenge(t, rng, clock, tokens);
  CHECK(c.spec.objects.size() == 4);
  CHECK(c.spec.challenge_id.size() == 32);
  CHECK(c.spec.issued_at == clock.now());
  CHECK(c.spec.ttl == kDefaultChallengeTtl);
  audit(c.spec, c.solution, t);
}

TEST_CASE("generation is deterministic byte-for-byte") {
  const GameTemplate t = soccer_template();
  ManualClock clock;
  auto make = [&] {
    Rng rng(1234);
    SeededTokenSource tokens(99);
    return generate_challenge(t, rng, clock, tokens);
  };
  const Challenge a = make();
  const Challenge b = make();
  CHECK(to_json(a.spec).dump() == to_json(b.spec).dump());
  CHECK(a.solution == b.solution);
}

TEST_CASE("over-dense templates raise GenerationError") {
  GameTemplate t = soccer_template();
  t.canvas = {100, 90};
  t.goal_size = {100, 80};
  Rng rng(1);
  ManualClock clock;
  SeededTokenSource tokens(1);
  CHECK_THROWS_AS((void)generate_challenge(t, rng, clock, tokens), GenerationError);
}

TEST_CASE("generated scenes are sound across seeds and templates") {
  const auto templates = load_templates(gcaptcha::testing::template_dir());
  ManualClock clock;
  SeededTokenSource tokens(5);
  std::set<int> counts;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    const GameTemplate& t = pick_random_template(templates, rng);
    const Challenge c = generate_challenge(t, rng, clock, tokens);
    audit(c.spec, c.solution, t);
    counts.insert(static_cast<int>(c.spec.objects.size()) - 2);
  }
  // Distractor counts span the configured ranges, (2,4) and (3,5).
  CHECK(counts == std::set<int>{2, 3, 4, 5});
}

TEST_CASE("the spec carries nothing that distinguishes the target") {
  GameTemplate t = soccer_template();
  t.distractor_count_range = {3, 3};
  ManualClock clock;
  auto build = [&](std::size_t slot) {
    Rng rng(31);
    SeededTokenSource tokens(31);
    return detail::generate_with_target_slot(t, rng, clock, tokens, {}, slot);
  };
  const Challenge a = build(0);
  const Challenge b = build(2);
  REQUIRE(a.spec.objects.size() == b.spec.objects.size());
  // Same ids, kinds and regions in the same order; only class labels and
  // sprites of the two swapped draggables differ.
  int label_diffs = 0;
  for (std::size_t i = 0; i < a.spec.objects.size(); ++i) {
    const auto& oa = a.spec.objects[i];
    const auto& ob = b.spec.objects[i];
    CHECK(oa.object_id == ob.object_id);
    CHECK(oa.kind == ob.kind);
    CHECK(oa.region == ob.region);
    if (oa.class_label != ob.class_label) ++label_diffs;
  }
  CHECK(label_diffs == 2);
  CHECK(a.solution.target_object_id != b.solution.target_object_id);

  // Field inventory of the wire document.
  const json doc = to_json(a.spec);
  std::set<std::string> keys;
  for (const auto& [k, _] : doc.items()) keys.insert(k);
  CHECK(keys == std::set<std::string>{"challenge_id", "canvas", "objects", "issued_at", "ttl"});
  for (const auto& o : doc["objects"]) {
    std::set<std::string> ok;
    for (const auto& [k, _] : o.items()) ok.insert(k);
    CHECK(ok == std::set<std::string>{"object_id", "kind", "class_label", "sprite_ref", "region"});
  }
  const std::string text = doc.dump();
  CHECK(text.find("target") == std::string::npos);
}

TEST_CASE("draggable order does not reveal the target") {
  GameTemplate t = soccer_template();
  t.distractor_count_range = {2, 2};
  ManualClock clock;
  SeededTokenSource tokens(3);
  std::array<int, 3> positions{};
  constexpr int n = 6000;
  for (int i = 0; i < n; ++i) {
    Rng rng(static_cast<std::uint64_t>(i));
    const Challenge c = generate_challenge(t, rng, clock, tokens);
    for (std::size_t j = 1; j < c.spec.objects.size(); ++j) {
      if (c.spec.objects[j].object_id == c.solution.target_object_id) ++positions[j - 1];
    }
  }
  // Each position ~ Binomial(6000, 1/3): sd 36.5; allow 5 sd.
  for (int p : positions) CHECK(std::abs(p - n / 3) < 183);
}

TEST_CASE("pick_random_template") {
  Rng rng(1);
  std::vector<GameTemplate> one{soccer_template()};
  CHECK(pick_random_template(one, rng).template_id == "soccer");
  CHECK_THROWS_AS((void)pick_random_template({}, rng), EmptyTemplateSet);

  std::vector<GameTemplate> ten;
  for (int i = 0; i < 10; ++i) {
    GameTemplate t = soccer_template();
    t.template_id = "t" + std::to_string(i);
    ten.push_back(t);
  }
  std::map<std::string, int> counts;
  Rng r2(2);
  for (int i = 0; i < 100000; ++i) ++counts[pick_random_template(ten, r2).template_id];
  double chi2 = 0.0;
  for (const auto& [_, c] : counts) {
    CHECK(std::abs(c - 10000) <= 500);
    chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
  }
  // 9 degrees of freedom; p = 0.001 critical value 27.88.
  CHECK(chi2 < 27.88);
}
