#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <ext/pb_ds/assoc_container.hpp>
#include <ext/pb_ds/tree_policy.hpp>

#include "stir/partition.hpp"
#include "stir/rng.hpp"
#include "stir/torus.hpp"

namespace stir {

// Two cycles with registry indices i < j (before the event) joined.
struct MergeEffect {
  std::size_t i;
  std::size_t j;
  std::size_t length_i;
  std::size_t length_j;
  friend bool operator==(const MergeEffect&, const MergeEffect&) = default;
};

// Cycle i (before the event) of the given length was cut into pieces of
// sizes separation and length - separation. k is the canonical
// min(separation, length - separation); exact_half marks 2k == length.
struct SplitEffect {
  std::size_t i;
  std::size_t length;
  std::size_t k;
  std::size_t separation;
  bool exact_half;
  friend bool operator==(const SplitEffect&, const SplitEffect&) = default;
};

using TranspositionEffect = std::variant<MergeEffect, SplitEffect>;

inline bool is_merge(const TranspositionEffect& e) { return std::holds_alternative<MergeEffect>(e); }
inline bool is_split(const TranspositionEffect& e) { return std::holds_alternative<SplitEffect>(e); }

// A permutation of {0, ..., N-1} with a dynamic cycle index.
//
// Each cycle is stored as an implicit treap over its vertices in successor
// order, so the position of a vertex along its cycle is a rank query and
// cutting or joining cycles is a split/merge of treaps, all O(log N)
// expected. Cycles are ranked in a registry by decreasing length, ties by
// decreasing largest element.
class CyclePermutation {
 public:
  explicit CyclePermutation(std::size_t n = 0);  // identity
  static CyclePermutation from_successors(std::span<const Vertex> successors);
  static CyclePermutation uniform(std::size_t n, Rng& rng);

  std::size_t size() const { return successor_.size(); }
  Vertex successor(Vertex x) const { return successor_[x]; }
  Vertex predecessor(Vertex x) const { return predecessor_[x]; }
  const std::vector<Vertex>& successors() const { return successor_; }

  bool same_cycle(Vertex u, Vertex v) const { return root(u) == root(v); }
  std::size_t cycle_length(Vertex x) const { return nodes_[root(x)].size; }
  Vertex cycle_max(Vertex x) const { return nodes_[root(x)].max; }
  // Number of successor steps from u to v; u and v must share a cycle.
  std::size_t separation(Vertex u, Vertex v) const;
  // Registry index (0-based) of the cycle through x.
  std::size_t cycle_index(Vertex x) const;
  std::size_t cycle_count() const { return registry_.size(); }

  // Cycle lengths in registry order.
  CycleType lengths() const;
  OrderedPartition cycle_lengths() const { return OrderedPartition::from_lengths(lengths()); }
  // Cycles in registry order, each listed in successor order from its largest element.
  std::vector<std::vector<Vertex>> cycles() const;

  // What apply_transposition(u, v) would do, without doing it.
  TranspositionEffect preview(Vertex u, Vertex v) const;
  // sigma <- tau_{uv} o sigma.
  TranspositionEffect apply_transposition(Vertex u, Vertex v);
  TranspositionEffect apply_transposition(const Edge& e) { return apply_transposition(e.first, e.second); }

  // Full structural check; throws std::logic_error on the first violation.
  void check_invariants() const;

 private:
  static constexpr Vertex kNil = static_cast<Vertex>(-1);

  struct Node {
    Vertex left = kNil;
    Vertex right = kNil;
    Vertex parent = kNil;
    std::uint32_t priority = 0;
    std::uint32_t size = 1;
    Vertex max = 0;
  };

  // Registry key: (length, largest element); ordered by std::greater so rank 0
  // is the longest cycle.
  using Key = std::pair<std::uint32_t, Vertex>;
  using Registry = __gnu_pbds::tree<Key, __gnu_pbds::null_type, std::greater<Key>, __gnu_pbds::rb_tree_tag,
                                    __gnu_pbds::tree_order_statistics_node_update>;

  Key key_of(Vertex root) const { return {nodes_[root].size, nodes_[root].max}; }
  std::uint32_t subtree_size(Vertex t) const { return t == kNil ? 0 : nodes_[t].size; }
  void pull(Vertex t);
  Vertex root(Vertex x) const;
  std::size_t rank(Vertex x) const;
  Vertex join(Vertex a, Vertex b);
  std::pair<Vertex, Vertex> cut(Vertex t, std::size_t k);
  Vertex rotate_to_front(Vertex x);
  void build_cycles();

  std::vector<Vertex> successor_;
  std::vector<Vertex> predecessor_;
  std::vector<Node> nodes_;
  Registry registry_;
};

// Naive cycle type by walking the successor map; the oracle for the index.
CycleType cycle_type_by_walk(std::span<const Vertex> successors);

}  // namespace stir
