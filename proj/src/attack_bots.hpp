#pragma once

#include <stdexcept>

#include "gcaptcha/attack.hpp"
#include "gcaptcha/geometry.hpp"
#include "gcaptcha/rng.hpp"

namespace gcaptcha::bots {

struct Move {
  Point press;
  Point release;
};

inline const SceneObject* find_goal(const ChallengeSpec& spec) {
  for (const auto& o : spec.objects) {
    if (o.kind == ObjectKind::goal) return &o;
  }
  return nullptr;
}

inline const SceneObject& pick_draggable(const ChallengeSpec& spec, Rng& rng) {
  std::size_t k = 0;
  for (const auto& o : spec.objects) k += o.kind == ObjectKind::draggable ? 1 : 0;
  if (k == 0) throw std::runtime_error("scene has no draggable objects");
  std::size_t pick = rng.below(k);
  for (const auto& o : spec.objects) {
    if (o.kind != ObjectKind::draggable) continue;
    if (pick-- == 0) return o;
  }
  throw std::logic_error("unreachable");
}

// Stateless bots. Only the oracle reads the solution.
inline Move choose(StrategyName name, const ChallengeSpec& spec,
                   const ChallengeSolution* solution, Rng& rng) {
  const Region canvas = full_canvas(spec.canvas);
  switch (name) {
    case StrategyName::uniform_random: {
      const Point press = uniform_point(canvas, rng);
      return {press, uniform_point(canvas, rng)};
    }
    case StrategyName::object_aware: {
      const Point press = pick_draggable(spec, rng).region.center();
      return {press, uniform_point(canvas, rng)};
    }
    case StrategyName::goal_aware: {
      const SceneObject* goal = find_goal(spec);
      if (goal == nullptr) throw std::runtime_error("scene has no goal");
      return {pick_draggable(spec, rng).region.center(), goal->region.center()};
    }
    case StrategyName::oracle:
      if (solution == nullptr) {
        throw std::invalid_argument("oracle strategy needs the solution");
      }
      return {solution->target_region.center(), solution->goal_region.center()};
    case StrategyName::replay:
      break;
  }
  throw std::invalid_argument("strategy has no single-scene move");
}

}  // namespace gcaptcha::bots
