#include <cmath>
#include <set>

#include "doctest.h"
#include "stir/rng.hpp"

using stir::Rng;

TEST_CASE("philox4x32-10 known answers") {
  CHECK(Rng::philox({0, 0, 0, 0}, {0, 0}) == Rng::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Rng::philox({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        Rng::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Rng::philox({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        Rng::Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("same seed and stream reproduce the sequence") {
  Rng a{42, 7};
  Rng b{42, 7};
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(a() == b());
  }
}

TEST_CASE("distinct streams and seeds differ") {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng r{1, s};
    firsts.insert(r());
    Rng q{s + 2, 0};
    firsts.insert(q());
  }
  CHECK(firsts.size() == 200);
}

TEST_CASE("uniform draws stay in range") {
  Rng rng{3};
  double sum = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(rng.uniform_open() > 0.0);
    REQUIRE(rng.uniform_index(7) < 7);
    sum += u;
  }
  CHECK(std::abs(sum / kDraws - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / kDraws));
}

TEST_CASE("exponential mean") {
  Rng rng{5};
  double sum = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    sum += rng.exponential(2.0);
  }
  CHECK(std::abs(sum / kDraws - 0.5) < 4.0 * 0.5 / std::sqrt(kDraws));
}
