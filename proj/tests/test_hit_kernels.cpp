#include <doctest.h>

#include <vector>

#include "gcaptcha/hit_kernels.hpp"
#include "gcaptcha/verifier.hpp"

using namespace gcaptcha;
using namespace gcaptcha::kernels;

namespace {

struct Cloud {
  std::vector<std::int32_t> xs, ys;
  PointsSoA view() const { return {xs, ys}; }
};

Cloud random_cloud(Rng& rng, std::size_t n, std::int32_t lo, std::int32_t hi) {
  Cloud c;
  for (std::size_t i = 0; i < n; ++i) {
    c.xs.push_back(static_cast<std::int32_t>(rng.between(lo, hi)));
    c.ys.push_back(static_cast<std::int32_t>(rng.between(lo, hi)));
  }
  return c;
}

}  // namespace

TEST_CASE("scalar variant is always available") {
  const auto isas = supported_isas();
  REQUIRE_FALSE(isas.empty());
  CHECK(isas.front() == Isa::scalar);
  CHECK(isa_supported(active_isa()));
  MESSAGE("active ISA: " << isa_name(active_isa()));
}

TEST_CASE("every supported variant matches contains() element-wise") {
  Rng rng(17);
  for (int round = 0; round < 200; ++round) {
    // Odd lengths exercise the scalar tails of the vector loops.
    const auto n = static_cast<std::size_t>(rng.between(0, 67));
    const Cloud pts = random_cloud(rng, n, -5, 70);
    const Region r{static_cast<std::int32_t>(rng.between(-3, 50)),
                   static_cast<std::int32_t>(rng.between(-3, 50)),
                   static_cast<std::int32_t>(rng.between(1, 30)),
                   static_cast<std::int32_t>(rng.between(1, 30))};
    std::size_t expected_count = 0;
    std::vector<std::uint8_t> expected(n);
    for (std::size_t i = 0; i < n; ++i) {
      expected[i] = contains(r, {pts.xs[i], pts.ys[i]}) ? 1 : 0;
      expected_count += expected[i];
    }
    for (Isa isa : supported_isas()) {
      CAPTURE(isa_name(isa));
      std::vector<std::uint8_t> got(n, 7);
      contains_mask(isa, r, pts.view(), got);
      CHECK(got == expected);
      CHECK(count_contained(isa, r, pts.view()) == expected_count);
    }
  }
}

TEST_CASE("every supported variant matches verify_goal element-wise") {
  Rng rng(23);
  for (int round = 0; round < 200; ++round) {
    const auto n = static_cast<std::size_t>(rng.between(1, 131));
    const Cloud press = random_cloud(rng, n, 0, 63);
    const Cloud release = random_cloud(rng, n, 0, 63);
    const Region target{static_cast<std::int32_t>(rng.between(0, 40)),
                        static_cast<std::int32_t>(rng.between(0, 40)), 12, 9};
    const Region goal{static_cast<std::int32_t>(rng.between(0, 40)),
                      static_cast<std::int32_t>(rng.between(0, 40)), 20, 15};
    std::vector<std::uint8_t> expected(n);
    for (std::size_t i = 0; i < n; ++i) {
      expected[i] = verify_goal(target, goal, {press.xs[i], press.ys[i]},
                                {release.xs[i], release.ys[i]}) == GoalResult::correct;
    }
    for (Isa isa : supported_isas()) {
      CAPTURE(isa_name(isa));
      std::vector<std::uint8_t> got(n, 7);
      verify_mask(isa, target, goal, press.view(), release.view(), got);
      CHECK(got == expected);
    }
  }
}

TEST_CASE("lattice counts equal region areas") {
  const Lattice lattice({64, 48});
  CHECK(lattice.xs.size() == 64u * 48u);
  for (Isa isa : supported_isas()) {
    CHECK(count_contained(isa, {3, 5, 17, 11}, lattice.view()) == 17u * 11u);
    CHECK(count_contained(isa, full_canvas({64, 48}), lattice.view()) == 64u * 48u);
    CHECK(count_contained(isa, {60, 40, 10, 10}, lattice.view()) == 4u * 8u);
  }
}

TEST_CASE("mismatched spans are rejected") {
  const std::vector<std::int32_t> xs(5), ys(4);
  std::vector<std::uint8_t> out(5);
  CHECK_THROWS_AS(contains_mask(Isa::scalar, {0, 0, 1, 1}, {xs, ys}, out),
                  std::invalid_argument);
}
