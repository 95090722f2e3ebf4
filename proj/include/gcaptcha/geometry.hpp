#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gcaptcha/rng.hpp"

namespace gcaptcha {

// Integer pixel coordinates. Timestamps are relative to challenge display.
struct Point {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct TimedPoint {
  Point point;
  std::int64_t t_ms = 0;

  friend bool operator==(const TimedPoint&, const TimedPoint&) = default;
};

struct Size {
  std::int32_t width = 0;
  std::int32_t height = 0;

  friend bool operator==(const Size&, const Size&) = default;
};

using CanvasSize = Size;

// Axis-aligned rectangle, top-left anchored. Containment is half-open:
// [x, x + width) x [y, y + height).
struct Region {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t width = 0;
  std::int32_t height = 0;

  [[nodiscard]] constexpr bool valid() const { return width > 0 && height > 0; }
  [[nodiscard]] constexpr std::int64_t area() const {
    return static_cast<std::int64_t>(width) * height;
  }
  // Lattice point at the pixel center of the rectangle (always contained).
  [[nodiscard]] constexpr Point center() const {
    return {x + width / 2, y + height / 2};
  }

  friend bool operator==(const Region&, const Region&) = default;
};

class PlacementFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[nodiscard]] constexpr bool contains(const Region& r, Point p) {
  return r.x <= p.x && p.x < r.x + r.width && r.y <= p.y &&
         p.y < r.y + r.height;
}

// Interiors intersect; a shared edge is not an overlap.
[[nodiscard]] constexpr bool overlaps(const Region& a, const Region& b) {
  return a.x < b.x + b.width && b.x < a.x + a.width && a.y < b.y + b.height &&
         b.y < a.y + a.height;
}

// Equivalent to !overlaps(inflate(a, gap / 2), inflate(b, gap / 2)) in real
// arithmetic, so odd gaps are exact.
[[nodiscard]] constexpr bool separated(const Region& a, const Region& b,
                                       std::int32_t gap) {
  return !(a.x < b.x + b.width + gap && b.x < a.x + a.width + gap &&
           a.y < b.y + b.height + gap && b.y < a.y + a.height + gap);
}

[[nodiscard]] constexpr bool on_canvas(const Region& r, CanvasSize canvas) {
  return r.valid() && r.x >= 0 && r.y >= 0 && r.x + r.width <= canvas.width &&
         r.y + r.height <= canvas.height;
}

[[nodiscard]] constexpr bool on_canvas(Point p, CanvasSize canvas) {
  return p.x >= 0 && p.y >= 0 && p.x < canvas.width && p.y < canvas.height;
}

[[nodiscard]] constexpr Region full_canvas(CanvasSize canvas) {
  return {0, 0, canvas.width, canvas.height};
}

inline constexpr int kDefaultPlacementRetries = 1000;

// Rejection sampling over whole scenes: each round draws every region's
// top-left corner uniformly among on-canvas positions and keeps the round
// only if all pairs are separated by min_gap. Throws PlacementFailure after
// max_retries rounds, or immediately if a size cannot fit at all.
[[nodiscard]] std::vector<Region> place_non_overlapping(
    CanvasSize canvas, std::span<const Size> sizes, std::int32_t min_gap,
    Rng& rng, int max_retries = kDefaultPlacementRetries);

[[nodiscard]] Point uniform_point(const Region& region, Rng& rng);

}  // namespace gcaptcha
