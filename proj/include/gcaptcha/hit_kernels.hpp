#pragma once

// Batched rectangle hit-testing. Each kernel has a scalar reference and
// vector variants (AVX2 on x86-64, NEON on AArch64); the active variant is
// picked once at runtime from CPU features and can be forced with the
// GCAPTCHA_ISA environment variable ("scalar", "avx2", "neon").
//
// Points are passed structure-of-arrays. Output masks hold 1 for a hit and
// 0 otherwise. All spans of one call must have equal length.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "gcaptcha/geometry.hpp"

namespace gcaptcha::kernels {

enum class Isa { scalar, avx2, neon };

[[nodiscard]] std::string_view isa_name(Isa isa);
[[nodiscard]] bool isa_supported(Isa isa);
[[nodiscard]] std::vector<Isa> supported_isas();
// Best supported variant, honoring GCAPTCHA_ISA when it names a supported one.
[[nodiscard]] Isa active_isa();

struct PointsSoA {
  std::span<const std::int32_t> xs;
  std::span<const std::int32_t> ys;

  [[nodiscard]] std::size_t size() const { return xs.size(); }
};

void contains_mask(Isa isa, const Region& r, PointsSoA pts,
                   std::span<std::uint8_t> out);
[[nodiscard]] std::size_t count_contained(Isa isa, const Region& r,
                                          PointsSoA pts);

// Element-wise press/release adjudication against a target and goal region:
// out[i] = contains(target, press[i]) && contains(goal, release[i]).
void verify_mask(Isa isa, const Region& target, const Region& goal,
                 PointsSoA press, PointsSoA release,
                 std::span<std::uint8_t> out);

inline void contains_mask(const Region& r, PointsSoA pts,
                          std::span<std::uint8_t> out) {
  contains_mask(active_isa(), r, pts, out);
}
[[nodiscard]] inline std::size_t count_contained(const Region& r,
                                                 PointsSoA pts) {
  return count_contained(active_isa(), r, pts);
}
inline void verify_mask(const Region& target, const Region& goal,
                        PointsSoA press, PointsSoA release,
                        std::span<std::uint8_t> out) {
  verify_mask(active_isa(), target, goal, press, release, out);
}

// Lattice of every pixel on the canvas in row-major order.
struct Lattice {
  std::vector<std::int32_t> xs;
  std::vector<std::int32_t> ys;

  explicit Lattice(CanvasSize canvas);
  [[nodiscard]] PointsSoA view() const { return {xs, ys}; }
};

namespace detail {

// Per-ISA entry points; vector variants only exist on matching targets.
void contains_mask_scalar(const Region&, PointsSoA, std::span<std::uint8_t>);
std::size_t count_contained_scalar(const Region&, PointsSoA);
void verify_mask_scalar(const Region&, const Region&, PointsSoA, PointsSoA,
                        std::span<std::uint8_t>);

void contains_mask_avx2(const Region&, PointsSoA, std::span<std::uint8_t>);
std::size_t count_contained_avx2(const Region&, PointsSoA);
void verify_mask_avx2(const Region&, const Region&, PointsSoA, PointsSoA,
                      std::span<std::uint8_t>);

void contains_mask_neon(const Region&, PointsSoA, std::span<std::uint8_t>);
std::size_t count_contained_neon(const Region&, PointsSoA);
void verify_mask_neon(const Region&, const Region&, PointsSoA, PointsSoA,
                      std::span<std::uint8_t>);

}  // namespace detail
}  // namespace gcaptcha::kernels
