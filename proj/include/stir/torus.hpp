#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stir/rng.hpp"

namespace stir {

using Vertex = std::uint32_t;

// Unordered vertex pair stored with first < second.
struct Edge {
  Vertex first;
  Vertex second;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

Edge make_edge(Vertex a, Vertex b);

// The lattice torus (Z/n)^d with row-major vertex indexing and its
// nearest-neighbour edges. For n = 2 the two steps along an axis reach the
// same vertex; the duplicate edge is collapsed, leaving dN/2 edges.
class TorusLattice {
 public:
  TorusLattice(int dimension, int side);

  int dimension() const { return dimension_; }
  int side() const { return side_; }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool degenerate() const { return side_ == 2; }

  Vertex vertex_index(std::span<const int> coords) const;
  std::vector<int> coordinates(Vertex v) const;
  std::vector<Vertex> neighbours(Vertex v) const;

  const Edge& sample_edge(Rng& rng) const { return edges_[rng.uniform_index(edges_.size())]; }

 private:
  int dimension_;
  int side_;
  std::size_t vertex_count_;
  std::vector<std::size_t> strides_;
  std::vector<Edge> edges_;
};

}  // namespace stir
