// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include "gcaptcha/hit_kernels.hpp"

namespace gcaptcha::kernels::detail {

namespace {

struct RegionLanes {
  __m256i lo_x, hi_x, lo_y, hi_y;

  explicit RegionLanes(const Region& r)
      : lo_x(_mm256_set1_epi32(r.x - 1)),
        hi_x(_mm256_set1_epi32(r.x + r.width)),
        lo_y(_mm256_set1_epi32(r.y - 1)),
        hi_y(_mm256_set1_epi32(r.y + r.height)) {}

  // x > lo-1 && hi > x, likewise for y; all-ones lanes are hits.
  [[nodiscard]] __m256i hit(__m256i x, __m256i y) const {
    const __m256i in_x =
        _mm256_and_si256(_mm256_cmpgt_epi32(x, lo_x), _mm256_cmpgt_epi32(hi_x, x));
    const __m256i in_y =
        _mm256_and_si256(_mm256_cmpgt_epi32(y, lo_y), _mm256_cmpgt_epi32(hi_y, y));
    return _mm256_and_si256(in_x, in_y);
  }
};

inline __m256i load8(const std::int32_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

inline unsigned lane_bits(__m256i mask) {
  return static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(mask)));
}

inline void store_bits(unsigned bits, std::uint8_t* out) {
  for (int lane = 0; lane < 8; ++lane) out[lane] = (bits >> lane) & 1U;
}

}  // namespace

void contains_mask_avx2(const Region& r, PointsSoA pts,
                        std::span<std::uint8_t> out) {
  const RegionLanes lanes(r);
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    store_bits(lane_bits(lanes.hit(load8(&pts.xs[i]), load8(&pts.ys[i]))),
               &out[i]);
  }
  if (i < n) {
    contains_mask_scalar(r, {pts.xs.subspan(i), pts.ys.subspan(i)},
                         out.subspan(i));
  }
}

std::size_t count_contained_avx2(const Region& r, PointsSoA pts) {
  const RegionLanes lanes(r);
  const std::size_t n = pts.size();
  std::size_t i = 0;
  std::size_t count = 0;
  for (; i + 8 <= n; i += 8) {
    count += static_cast<std::size_t>(__builtin_popcount(
        lane_bits(lanes.hit(load8(&pts.xs[i]), load8(&pts.ys[i])))));
  }
  if (i < n) {
    count += count_contained_scalar(r, {pts.xs.subspan(i), pts.ys.subspan(i)});
  }
  return count;
}

void verify_mask_avx2(const Region& target, const Region& goal,
                      PointsSoA press, PointsSoA release,
                      std::span<std::uint8_t> out) {
  const RegionLanes t(target);
  const RegionLanes g(goal);
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i hit =
        _mm256_and_si256(t.hit(load8(&press.xs[i]), load8(&press.ys[i])),
                         g.hit(load8(&release.xs[i]), load8(&release.ys[i])));
    store_bits(lane_bits(hit), &out[i]);
  }
  if (i < n) {
    verify_mask_scalar(target, goal, {press.xs.subspan(i), press.ys.subspan(i)},
                       {release.xs.subspan(i), release.ys.subspan(i)},
                       out.subspan(i));
  }
}

}  // namespace gcaptcha::kernels::detail
