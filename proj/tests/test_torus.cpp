#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "stir/stats.hpp"
#include "stir/torus.hpp"

using namespace stir;

TEST_CASE("row-major vertex index") {
  const TorusLattice t{2, 3};
  const std::vector<int> origin{0, 0};
  const std::vector<int> c12{1, 2};
  CHECK(t.vertex_index(origin) == 0);
  CHECK(t.vertex_index(c12) == 5);
  for (Vertex v = 0; v < t.vertex_count(); ++v) {
    CHECK(t.vertex_index(t.coordinates(v)) == v);
  }
}

TEST_CASE("edge counts and degree") {
  CHECK(TorusLattice{2, 3}.edge_count() == 18);
  CHECK(TorusLattice{3, 4}.edge_count() == 192);
  const TorusLattice ring{1, 4};
  CHECK(ring.edges() == std::vector<Edge>{make_edge(0, 1), make_edge(0, 3), make_edge(1, 2), make_edge(2, 3)});
  for (int d = 1; d <= 3; ++d) {
    for (int n = 3; n <= 5; ++n) {
      const TorusLattice t{d, n};
      CHECK(t.edge_count() == static_cast<std::size_t>(d) * t.vertex_count());
      std::vector<int> degree(t.vertex_count(), 0);
      for (const Edge& e : t.edges()) {
        CHECK(e.first < e.second);
        ++degree[e.first];
        ++degree[e.second];
      }
      CHECK(std::ranges::all_of(degree, [d](int g) { return g == 2 * d; }));
      CHECK(std::ranges::adjacent_find(t.edges()) == t.edges().end());
      for (Vertex v = 0; v < t.vertex_count(); ++v) {
        CHECK(t.neighbours(v).size() == static_cast<std::size_t>(2 * d));
      }
    }
  }
}

TEST_CASE("side two collapses parallel edges") {
  const TorusLattice t{2, 2};
  CHECK(t.degenerate());
  CHECK(t.edge_count() == 4);
}

TEST_CASE("edge sampling is uniform") {
  Rng rng{11};
  const TorusLattice ring{1, 4};
  std::vector<std::int64_t> counts(4, 0);
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i) {
    const Edge& e = ring.sample_edge(rng);
    const auto pos = std::ranges::find(ring.edges(), e) - ring.edges().begin();
    REQUIRE(pos < 4);
    ++counts[static_cast<std::size_t>(pos)];
  }
  const double sigma = std::sqrt(kDraws * 0.25 * 0.75);
  for (std::int64_t c : counts) {
    CHECK(std::abs(static_cast<double>(c) - kDraws / 4.0) < 3.0 * sigma);
  }

  const TorusLattice square{2, 4};
  std::vector<std::int64_t> hist(square.edge_count(), 0);
  for (int i = 0; i < 320000; ++i) {
    const Edge& e = square.sample_edge(rng);
    ++hist[static_cast<std::size_t>(std::ranges::find(square.edges(), e) - square.edges().begin())];
  }
  CHECK(chi_square_uniform(hist).p_value > 0.001);
}
