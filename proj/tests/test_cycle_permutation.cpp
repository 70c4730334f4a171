#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "stir/cycle_permutation.hpp"
#include "stir/torus.hpp"

using namespace stir;

TEST_CASE("identity and full cycle") {
  CyclePermutation id{4};
  CHECK(id.cycle_count() == 4);
  CHECK(id.cycle_lengths() == OrderedPartition::from_lengths({1, 1, 1, 1}));
  const std::vector<Vertex> succ{1, 2, 3, 0};
  const auto ring = CyclePermutation::from_successors(succ);
  CHECK(ring.cycle_lengths() == OrderedPartition{});
  CHECK(ring.separation(0, 2) == 2);
  CHECK(ring.separation(3, 1) == 2);
  CHECK(ring.separation(1, 0) == 3);
  const std::vector<Vertex> not_bijective{1, 1, 0};
  CHECK_THROWS_AS(CyclePermutation::from_successors(not_bijective), std::invalid_argument);
}

TEST_CASE("merge of two fixed points") {
  CyclePermutation id{4};
  const auto effect = id.apply_transposition(0, 1);
  REQUIRE(is_merge(effect));
  const auto& m = std::get<MergeEffect>(effect);
  CHECK(m.length_i == 1);
  CHECK(m.length_j == 1);
  CHECK(id.lengths() == CycleType{2, 1, 1});
  CHECK(id.successor(0) == 1);
  CHECK(id.successor(1) == 0);
  id.check_invariants();
}

TEST_CASE("half split of a four-cycle") {
  const std::vector<Vertex> succ{1, 2, 3, 0};
  auto ring = CyclePermutation::from_successors(succ);
  const auto effect = ring.apply_transposition(0, 2);
  REQUIRE(is_split(effect));
  const auto& s = std::get<SplitEffect>(effect);
  CHECK(s.length == 4);
  CHECK(s.k == 2);
  CHECK(s.exact_half);
  CHECK(ring.lengths() == CycleType{2, 2});
  // tau_{02} o sigma: 0 -> 1, 1 -> 0, 2 -> 3, 3 -> 2
  CHECK(ring.successors() == std::vector<Vertex>{1, 0, 3, 2});
  ring.check_invariants();

  auto other = CyclePermutation::from_successors(succ);
  const auto uneven = std::get<SplitEffect>(other.apply_transposition(0, 1));
  CHECK(uneven.k == 1);
  CHECK(uneven.separation == 1);
  CHECK_FALSE(uneven.exact_half);
  CHECK_THROWS_AS(other.apply_transposition(2, 2), std::invalid_argument);
}

TEST_CASE("preview agrees with apply") {
  Rng rng{31};
  auto perm = CyclePermutation::uniform(40, rng);
  for (int s = 0; s < 2000; ++s) {
    const auto u = static_cast<Vertex>(rng.uniform_index(40));
    auto v = static_cast<Vertex>(rng.uniform_index(39));
    v += v >= u ? 1 : 0;
    const auto seen = perm.preview(u, v);
    CHECK(perm.apply_transposition(u, v) == seen);
  }
}

TEST_CASE("transpositions are involutions") {
  Rng rng{32};
  const TorusLattice lattice{2, 5};
  for (int s = 0; s < 10000; ++s) {
    auto perm = CyclePermutation::uniform(lattice.vertex_count(), rng);
    const auto before = perm.successors();
    const auto lengths = perm.lengths();
    const Edge& b = lattice.sample_edge(rng);
    perm.apply_transposition(b);
    perm.apply_transposition(b);
    REQUIRE(perm.lengths() == lengths);
    REQUIRE(perm.successors() == before);
  }
}

TEST_CASE("cycle index tracks a successor walk") {
  Rng rng{33};
  for (std::size_t n : {1u, 2u, 7u, 30u, 100u}) {
    auto perm = CyclePermutation::uniform(n, rng);
    for (int step = 0; step < 300 && n >= 2; ++step) {
      const auto u = static_cast<Vertex>(rng.uniform_index(n));
      auto v = static_cast<Vertex>(rng.uniform_index(n - 1));
      v += v >= u ? 1 : 0;
      perm.apply_transposition(u, v);
      REQUIRE_NOTHROW(perm.check_invariants());
      REQUIRE(perm.lengths() == cycle_type_by_walk(perm.successors()));
    }
  }
}

TEST_CASE("registry orders ties by the larger maximum") {
  const std::vector<Vertex> succ{1, 0, 3, 2, 4};
  const auto perm = CyclePermutation::from_successors(succ);
  CHECK(perm.cycle_index(2) == 0);
  CHECK(perm.cycle_index(0) == 1);
  CHECK(perm.cycle_index(4) == 2);
  const auto cycles = perm.cycles();
  CHECK(cycles[0] == std::vector<Vertex>{3, 2});
  CHECK(cycles[1] == std::vector<Vertex>{1, 0});
}

TEST_CASE("separation counts successor steps") {
  Rng rng{34};
  const auto perm = CyclePermutation::uniform(200, rng);
  for (int s = 0; s < 500; ++s) {
    const auto u = static_cast<Vertex>(rng.uniform_index(200));
    Vertex v = u;
    std::size_t steps = 0;
    const std::size_t target = rng.uniform_index(perm.cycle_length(u));
    while (steps < target) {
      v = perm.successor(v);
      ++steps;
    }
    CHECK(perm.separation(u, v) == target);
  }
}

TEST_CASE("transposition cost grows like log N") {
  // d = 1 stirring from a uniform permutation, best of three passes. Measured
  // growth of ns per event / log2 N from 2^10 to 2^20 is about 2.2x, from cache
  // misses along deeper treap paths.
  std::vector<double> per_log;
  for (int e = 10; e <= 20; e += 2) {
    const TorusLattice lattice{1, 1 << e};
    Rng rng{35};
    auto perm = CyclePermutation::uniform(lattice.vertex_count(), rng);
    std::vector<Edge> edges;
    constexpr int kEvents = 100000;
    edges.reserve(kEvents);
    for (int s = 0; s < kEvents; ++s) {
      edges.push_back(lattice.sample_edge(rng));
    }
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      for (const Edge& b : edges) {
        perm.apply_transposition(b);
      }
      const std::chrono::duration<double, std::nano> elapsed = std::chrono::steady_clock::now() - start;
      best = std::min(best, elapsed.count() / kEvents);
    }
    per_log.push_back(best / e);
    MESSAGE("N = 2^" << e << ": " << best << " ns per event");
  }
  CHECK(per_log.back() < 4.0 * per_log.front());
}
