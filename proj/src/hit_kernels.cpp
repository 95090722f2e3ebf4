#include "gcaptcha/hit_kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace gcaptcha::kernels {

namespace {

#if defined(__x86_64__) || defined(_M_X64)
constexpr bool kX86 = true;
#else
constexpr bool kX86 = false;
#endif

#if defined(__aarch64__) && defined(__ARM_NEON)
constexpr bool kNeon = true;
#else
constexpr bool kNeon = false;
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* forced = std::getenv("GCAPTCHA_ISA")) {
    const std::string_view name(forced);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (isa_name(isa) == name && isa_supported(isa)) return isa;
    }
  }
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  if (isa_supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

void check_sizes(PointsSoA pts, std::size_t out) {
  if (pts.xs.size() != pts.ys.size() || pts.xs.size() != out) {
    throw std::invalid_argument("hit kernel spans differ in length");
  }
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return kX86 && cpu_has_avx2();
    case Isa::neon: return kNeon;
  }
  return false;
}

std::vector<Isa> supported_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (isa_supported(isa)) out.push_back(isa);
  }
  return out;
}

Isa active_isa() {
  static const Isa chosen = detect();
  return chosen;
}

Lattice::Lattice(CanvasSize canvas) {
  const auto n = static_cast<std::size_t>(canvas.width) * canvas.height;
  xs.reserve(n);
  ys.reserve(n);
  for (std::int32_t y = 0; y < canvas.height; ++y) {
    for (std::int32_t x = 0; x < canvas.width; ++x) {
      xs.push_back(x);
      ys.push_back(y);
    }
  }
}

void contains_mask(Isa isa, const Region& r, PointsSoA pts,
                   std::span<std::uint8_t> out) {
  check_sizes(pts, out.size());
  switch (isa) {
    case Isa::avx2:
      if constexpr (kX86) return detail::contains_mask_avx2(r, pts, out);
      break;
    case Isa::neon:
      if constexpr (kNeon) return detail::contains_mask_neon(r, pts, out);
      break;
    case Isa::scalar:
      return detail::contains_mask_scalar(r, pts, out);
  }
  throw std::invalid_argument("unsupported ISA");
}

std::size_t count_contained(Isa isa, const Region& r, PointsSoA pts) {
  check_sizes(pts, pts.xs.size());
  switch (isa) {
    case Isa::avx2:
      if constexpr (kX86) return detail::count_contained_avx2(r, pts);
      break;
    case Isa::neon:
      if constexpr (kNeon) return detail::count_contained_neon(r, pts);
      break;
    case Isa::scalar:
      return detail::count_contained_scalar(r, pts);
  }
  throw std::invalid_argument("unsupported ISA");
}

void verify_mask(Isa isa, const Region& target, const Region& goal,
                 PointsSoA press, PointsSoA release,
                 std::span<std::uint8_t> out) {
  check_sizes(press, out.size());
  check_sizes(release, out.size());
  switch (isa) {
    case Isa::avx2:
      if constexpr (kX86)
        return detail::verify_mask_avx2(target, goal, press, release, out);
      break;
    case Isa::neon:
      if constexpr (kNeon)
        return detail::verify_mask_neon(target, goal, press, release, out);
      break;
    case Isa::scalar:
      return detail::verify_mask_scalar(target, goal, press, release, out);
  }
  throw std::invalid_argument("unsupported ISA");
}

namespace detail {

void contains_mask_scalar(const Region& r, PointsSoA pts,
                          std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = contains(r, {pts.xs[i], pts.ys[i]}) ? 1 : 0;
  }
}

std::size_t count_contained_scalar(const Region& r, PointsSoA pts) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    n += contains(r, {pts.xs[i], pts.ys[i]}) ? 1 : 0;
  }
  return n;
}

void verify_mask_scalar(const Region& target, const Region& goal,
                        PointsSoA press, PointsSoA release,
                        std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (contains(target, {press.xs[i], press.ys[i]}) &&
              contains(goal, {release.xs[i], release.ys[i]}))
                 ? 1
                 : 0;
  }
}

}  // namespace detail
}  // namespace gcaptcha::kernels
