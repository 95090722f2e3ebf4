// Built only for AArch64 targets.
#include <arm_neon.h>

#include "gcaptcha/hit_kernels.hpp"

namespace gcaptcha::kernels::detail {

namespace {

struct RegionLanes {
  int32x4_t lo_x, hi_x, lo_y, hi_y;

  explicit RegionLanes(const Region& r)
      : lo_x(vdupq_n_s32(r.x)),
        hi_x(vdupq_n_s32(r.x + r.width)),
        lo_y(vdupq_n_s32(r.y)),
        hi_y(vdupq_n_s32(r.y + r.height)) {}

  [[nodiscard]] uint32x4_t hit(int32x4_t x, int32x4_t y) const {
    const uint32x4_t in_x = vandq_u32(vcgeq_s32(x, lo_x), vcltq_s32(x, hi_x));
    const uint32x4_t in_y = vandq_u32(vcgeq_s32(y, lo_y), vcltq_s32(y, hi_y));
    return vandq_u32(in_x, in_y);
  }
};

inline void store4(uint32x4_t mask, std::uint8_t* out) {
  const uint32x4_t ones = vshrq_n_u32(mask, 31);
  out[0] = static_cast<std::uint8_t>(vgetq_lane_u32(ones, 0));
  out[1] = static_cast<std::uint8_t>(vgetq_lane_u32(ones, 1));
  out[2] = static_cast<std::uint8_t>(vgetq_lane_u32(ones, 2));
  out[3] = static_cast<std::uint8_t>(vgetq_lane_u32(ones, 3));
}

}  // namespace

void contains_mask_neon(const Region& r, PointsSoA pts,
                        std::span<std::uint8_t> out) {
  const RegionLanes lanes(r);
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    store4(lanes.hit(vld1q_s32(&pts.xs[i]), vld1q_s32(&pts.ys[i])), &out[i]);
  }
  if (i < n) {
    contains_mask_scalar(r, {pts.xs.subspan(i), pts.ys.subspan(i)},
                         out.subspan(i));
  }
}

std::size_t count_contained_neon(const Region& r, PointsSoA pts) {
  const RegionLanes lanes(r);
  const std::size_t n = pts.size();
  std::size_t i = 0;
  uint32x4_t acc = vdupq_n_u32(0);
  for (; i + 4 <= n; i += 4) {
    acc = vaddq_u32(acc, vshrq_n_u32(lanes.hit(vld1q_s32(&pts.xs[i]),
                                               vld1q_s32(&pts.ys[i])),
                                     31));
  }
  std::size_t count = vaddvq_u32(acc);
  if (i < n) {
    count += count_contained_scalar(r, {pts.xs.subspan(i), pts.ys.subspan(i)});
  }
  return count;
}

void verify_mask_neon(const Region& target, const Region& goal,
                      PointsSoA press, PointsSoA release,
                      std::span<std::uint8_t> out) {
  const RegionLanes t(target);
  const RegionLanes g(goal);
  const std::size_t n = out.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    store4(vandq_u32(t.hit(vld1q_s32(&press.xs[i]), vld1q_s32(&press.ys[i])),
                     g.hit(vld1q_s32(&release.xs[i]), vld1q_s32(&release.ys[i]))),
           &out[i]);
  }
  if (i < n) {
    verify_mask_scalar(target, goal, {press.xs.subspan(i), press.ys.subspan(i)},
                       {release.xs.subspan(i), release.ys.subspan(i)},
                       out.subspan(i));
  }
}

}  // namespace gcaptcha::kernels::detail
