#include "gcaptcha/geometry.hpp"

#include <string>

namespace gcaptcha {

std::vector<Region> place_non_overlapping(CanvasSize canvas,
                                          std::span<const Size> sizes,
                                          std::int32_t min_gap, Rng& rng,
                                          int max_retries) {
  if (max_retries < 1) {
    throw std::invalid_argument("max_retries must be >= 1");
  }
  if (min_gap < 0) {
    throw std::invalid_argument("min_gap must be >= 0");
  }
  for (const Size& s : sizes) {
    if (s.width <= 0 || s.height <= 0 || s.width > canvas.width ||
        s.height > canvas.height) {
      throw PlacementFailure("object " + std::to_string(s.width) + "x" +
                             std::to_string(s.height) +
                             " does not fit the canvas");
    }
  }

  std::vector<Region> placed;
  placed.reserve(sizes.size());
  for (int round = 0; round < max_retries; ++round) {
    placed.clear();
    bool ok = true;
    for (const Size& s : sizes) {
      const Region candidate{
          static_cast<std::int32_t>(rng.between(0, canvas.width - s.width)),
          static_cast<std::int32_t>(rng.between(0, canvas.height - s.height)),
          s.width, s.height};
      for (const Region& other : placed) {
        if (!separated(candidate, other, min_gap)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      placed.push_back(candidate);
    }
    if (ok) return placed;
  }
  throw PlacementFailure("could not place " + std::to_string(sizes.size()) +
                         " objects after " + std::to_string(max_retries) +
                         " rounds");
}

Point uniform_point(const Region& region, Rng& rng) {
  return {static_cast<std::int32_t>(rng.between(region.x, region.x + region.width - 1)),
          static_cast<std::int32_t>(rng.between(region.y, region.y + region.height - 1))};
}

}  // namespace gcaptcha
