#include "stir/torus.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace stir {

Edge make_edge(Vertex a, Vertex b) {
  if (a == b) {
    throw std::invalid_argument("an edge needs two distinct vertices");
  }
  return a < b ? Edge{a, b} : Edge{b, a};
}

TorusLattice::TorusLattice(int dimension, int side) : dimension_{dimension}, side_{side}, vertex_count_{1} {
  if (dimension < 1 || side < 2) {
    throw std::invalid_argument("torus needs d >= 1 and n >= 2");
  }
  strides_.assign(static_cast<std::size_t>(dimension), 1);
  for (int axis = dimension - 1; axis >= 0; --axis) {
    strides_[static_cast<std::size_t>(axis)] = vertex_count_;
    vertex_count_ *= static_cast<std::size_t>(side);
    if (vertex_count_ > (std::size_t{1} << 31)) {
      throw std::invalid_argument("torus too large for 32-bit vertex labels");
    }
  }

  // (smaller endpoint, axis) order; collapsed duplicates only arise for n = 2.
  std::vector<std::tuple<Vertex, int, Vertex>> keyed;
  keyed.reserve(vertex_count_ * static_cast<std::size_t>(dimension));
  for (Vertex v = 0; v < vertex_count_; ++v) {
    auto coords = coordinates(v);
    for (int axis = 0; axis < dimension; ++axis) {
      auto& c = coords[static_cast<std::size_t>(axis)];
      const int saved = c;
      c = (c + 1) % side;
      const Edge e = make_edge(v, vertex_index(coords));
      c = saved;
      keyed.emplace_back(e.first, axis, e.second);
    }
  }
  std::sort(keyed.begin(), keyed.end());
  keyed.erase(std::unique(keyed.begin(), keyed.end()), keyed.end());
  edges_.reserve(keyed.size());
  for (const auto& [a, axis, b] : keyed) {
    edges_.push_back(Edge{a, b});
  }
}

Vertex TorusLattice::vertex_index(std::span<const int> coords) const {
  if (coords.size() != static_cast<std::size_t>(dimension_)) {
    throw std::invalid_argument("coordinate tuple has the wrong dimension");
  }
  std::size_t index = 0;
  for (std::size_t axis = 0; axis < coords.size(); ++axis) {
    const int c = ((coords[axis] % side_) + side_) % side_;
    index += static_cast<std::size_t>(c) * strides_[axis];
  }
  return static_cast<Vertex>(index);
}

std::vector<int> TorusLattice::coordinates(Vertex v) const {
  if (v >= vertex_count_) {
    throw std::invalid_argument("vertex out of range");
  }
  std::vector<int> coords(static_cast<std::size_t>(dimension_));
  std::size_t rest = v;
  for (std::size_t axis = 0; axis < coords.size(); ++axis) {
    coords[axis] = static_cast<int>(rest / strides_[axis]);
    rest %= strides_[axis];
  }
  return coords;
}

std::vector<Vertex> TorusLattice::neighbours(Vertex v) const {
  auto coords = coordinates(v);
  std::vector<Vertex> out;
  for (auto& c : coords) {
    const int saved = c;
    for (int step : {1, -1}) {
      c = saved + step;
      out.push_back(vertex_index(coords));
    }
    c = saved;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace stir
