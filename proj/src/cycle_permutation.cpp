#include "stir/cycle_permutation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace stir {

namespace {

// Priorities are a fixed hash of the vertex, so the treap shape depends only
// on the cyclic sequence and not on the history of operations.
std::uint32_t priority_of(Vertex v) {
  std::uint64_t z = static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return static_cast<std::uint32_t>((z ^ (z >> 31)) >> 32);
}

}  // namespace

CyclePermutation::CyclePermutation(std::size_t n) : successor_(n), predecessor_(n) {
  if (n >= static_cast<std::size_t>(kNil)) {
    throw std::invalid_argument("permutation too large");
  }
  std::iota(successor_.begin(), successor_.end(), Vertex{0});
  std::iota(predecessor_.begin(), predecessor_.end(), Vertex{0});
  build_cycles();
}

CyclePermutation CyclePermutation::from_successors(std::span<const Vertex> successors) {
  const std::size_t n = successors.size();
  CyclePermutation perm;
  perm.successor_.assign(successors.begin(), successors.end());
  perm.predecessor_.assign(n, kNil);
  for (Vertex x = 0; x < n; ++x) {
    const Vertex y = successors[x];
    if (y >= n || perm.predecessor_[y] != kNil) {
      throw std::invalid_argument("successor map is not a bijection");
    }
    perm.predecessor_[y] = x;
  }
  perm.build_cycles();
  return perm;
}

CyclePermutation CyclePermutation::uniform(std::size_t n, Rng& rng) {
  std::vector<Vertex> image(n);
  std::iota(image.begin(), image.end(), Vertex{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(image[i - 1], image[rng.uniform_index(i)]);
  }
  return from_successors(image);
}

void CyclePermutation::build_cycles() {
  const std::size_t n = successor_.size();
  nodes_.assign(n, Node{});
  registry_.clear();
  for (Vertex v = 0; v < n; ++v) {
    nodes_[v].priority = priority_of(v);
    nodes_[v].max = v;
  }
  std::vector<bool> seen(n, false);
  for (Vertex start = 0; start < n; ++start) {
    if (seen[start]) {
      continue;
    }
    Vertex tree = kNil;
    Vertex x = start;
    do {
      seen[x] = true;
      tree = join(tree, x);
      x = successor_[x];
    } while (x != start);
    registry_.insert(key_of(tree));
  }
}

void CyclePermutation::pull(Vertex t) {
  Node& node = nodes_[t];
  node.size = 1 + subtree_size(node.left) + subtree_size(node.right);
  node.max = t;
  if (node.left != kNil) {
    node.max = std::max(node.max, nodes_[node.left].max);
  }
  if (node.right != kNil) {
    node.max = std::max(node.max, nodes_[node.right].max);
  }
}

Vertex CyclePermutation::root(Vertex x) const {
  while (nodes_[x].parent != kNil) {
    x = nodes_[x].parent;
  }
  return x;
}

std::size_t CyclePermutation::rank(Vertex x) const {
  std::size_t r = subtree_size(nodes_[x].left);
  for (Vertex child = x, p = nodes_[x].parent; p != kNil; child = p, p = nodes_[p].parent) {
    if (nodes_[p].right == child) {
      r += subtree_size(nodes_[p].left) + 1;
    }
  }
  return r;
}

Vertex CyclePermutation::join(Vertex a, Vertex b) {
  if (a == kNil) {
    return b;
  }
  if (b == kNil) {
    return a;
  }
  if (nodes_[a].priority > nodes_[b].priority) {
    const Vertex r = join(nodes_[a].right, b);
    nodes_[a].right = r;
    nodes_[r].parent = a;
    nodes_[a].parent = kNil;
    pull(a);
    return a;
  }
  const Vertex l = join(a, nodes_[b].left);
  nodes_[b].left = l;
  nodes_[l].parent = b;
  nodes_[b].parent = kNil;
  pull(b);
  return b;
}

// First k elements of t go left. Returned roots have no parent.
std::pair<Vertex, Vertex> CyclePermutation::cut(Vertex t, std::size_t k) {
  if (t == kNil) {
    return {kNil, kNil};
  }
  nodes_[t].parent = kNil;
  const std::size_t left_size = subtree_size(nodes_[t].left);
  if (k <= left_size) {
    auto [a, b] = cut(nodes_[t].left, k);
    nodes_[t].left = b;
    if (b != kNil) {
      nodes_[b].parent = t;
    }
    pull(t);
    return {a, t};
  }
  auto [a, b] = cut(nodes_[t].right, k - left_size - 1);
  nodes_[t].right = a;
  if (a != kNil) {
    nodes_[a].parent = t;
  }
  pull(t);
  return {t, b};
}

Vertex CyclePermutation::rotate_to_front(Vertex x) {
  const std::size_t r = rank(x);
  const Vertex t = root(x);
  if (r == 0) {
    return t;
  }
  auto [head, tail] = cut(t, r);
  return join(tail, head);
}

std::size_t CyclePermutation::separation(Vertex u, Vertex v) const {
  const Vertex t = root(u);
  if (t != root(v)) {
    throw std::invalid_argument("separation needs two vertices on one cycle");
  }
  const std::size_t m = nodes_[t].size;
  return (rank(v) + m - rank(u)) % m;
}

std::size_t CyclePermutation::cycle_index(Vertex x) const { return registry_.order_of_key(key_of(root(x))); }

CycleType CyclePermutation::lengths() const {
  CycleType out;
  out.reserve(registry_.size());
  for (const auto& key : registry_) {
    out.push_back(static_cast<std::int64_t>(key.first));
  }
  return out;
}

std::vector<std::vector<Vertex>> CyclePermutation::cycles() const {
  std::vector<std::vector<Vertex>> out;
  out.reserve(registry_.size());
  for (const auto& [length, top] : registry_) {
    std::vector<Vertex> cycle;
    cycle.reserve(length);
    Vertex x = top;
    do {
      cycle.push_back(x);
      x = successor_[x];
    } while (x != top);
    out.push_back(std::move(cycle));
  }
  return out;
}

TranspositionEffect CyclePermutation::preview(Vertex u, Vertex v) const {
  if (u == v || u >= size() || v >= size()) {
    throw std::invalid_argument("transposition needs two distinct valid vertices");
  }
  const Vertex ru = root(u);
  const Vertex rv = root(v);
  if (ru != rv) {
    std::size_t i = registry_.order_of_key(key_of(ru));
    std::size_t j = registry_.order_of_key(key_of(rv));
    std::size_t li = nodes_[ru].size;
    std::size_t lj = nodes_[rv].size;
    if (i > j) {
      std::swap(i, j);
      std::swap(li, lj);
    }
    return MergeEffect{i, j, li, lj};
  }
  const std::size_t m = nodes_[ru].size;
  const std::size_t sep = (rank(v) + m - rank(u)) % m;
  const std::size_t k = std::min(sep, m - sep);
  return SplitEffect{registry_.order_of_key(key_of(ru)), m, k, sep, 2 * k == m};
}

TranspositionEffect CyclePermutation::apply_transposition(Vertex u, Vertex v) {
  const TranspositionEffect effect = preview(u, v);
  const Vertex ru = root(u);
  const Vertex rv = root(v);
  if (is_merge(effect)) {
    registry_.erase(key_of(ru));
    registry_.erase(key_of(rv));
    // [u .. pred(u)] followed by [v .. pred(v)] is the merged cycle.
    const Vertex a = rotate_to_front(u);
    const Vertex b = rotate_to_front(v);
    registry_.insert(key_of(join(a, b)));
  } else {
    registry_.erase(key_of(ru));
    // [u .. pred(v)] and [v .. pred(u)] become separate cycles.
    const Vertex t = rotate_to_front(u);
    auto [head, tail] = cut(t, std::get<SplitEffect>(effect).separation);
    registry_.insert(key_of(head));
    registry_.insert(key_of(tail));
  }
  const Vertex p = predecessor_[u];
  const Vertex q = predecessor_[v];
  successor_[p] = v;
  predecessor_[v] = p;
  successor_[q] = u;
  predecessor_[u] = q;
  return effect;
}

void CyclePermutation::check_invariants() const {
  const std::size_t n = size();
  auto fail = [](const std::string& what) { throw std::logic_error("cycle index invariant: " + what); };
  if (predecessor_.size() != n || nodes_.size() != n) {
    fail("array sizes differ");
  }
  for (Vertex x = 0; x < n; ++x) {
    if (successor_[x] >= n || predecessor_[successor_[x]] != x) {
      fail("successor map is not a bijection at " + std::to_string(x));
    }
  }
  std::vector<Key> keys;
  std::size_t covered = 0;
  for (Vertex t = 0; t < n; ++t) {
    if (nodes_[t].parent != kNil) {
      continue;
    }
    // In-order walk of this treap, checking links and aggregates.
    std::vector<Vertex> sequence;
    std::vector<std::pair<Vertex, bool>> stack{{t, false}};
    while (!stack.empty()) {
      auto [x, expanded] = stack.back();
      stack.pop_back();
      if (expanded) {
        sequence.push_back(x);
        continue;
      }
      const Node& node = nodes_[x];
      std::uint32_t size = 1;
      Vertex max = x;
      for (Vertex child : {node.left, node.right}) {
        if (child == kNil) {
          continue;
        }
        if (nodes_[child].parent != x) {
          fail("broken parent link");
        }
        if (nodes_[child].priority > node.priority) {
          fail("heap order violated");
        }
        size += nodes_[child].size;
        max = std::max(max, nodes_[child].max);
      }
      if (size != node.size || max != node.max) {
        fail("stale subtree aggregate");
      }
      if (node.right != kNil) {
        stack.emplace_back(node.right, false);
      }
      stack.emplace_back(x, true);
      if (node.left != kNil) {
        stack.emplace_back(node.left, false);
      }
    }
    for (std::size_t s = 0; s < sequence.size(); ++s) {
      if (successor_[sequence[s]] != sequence[(s + 1) % sequence.size()]) {
        fail("cycle sequence disagrees with the successor map");
      }
    }
    covered += sequence.size();
    keys.push_back(key_of(t));
  }
  if (covered != n) {
    fail("cycles do not partition the vertex set");
  }
  if (keys.size() != registry_.size()) {
    fail("registry size differs from the number of cycles");
  }
  std::sort(keys.begin(), keys.end(), std::greater<Key>{});
  if (!std::equal(keys.begin(), keys.end(), registry_.begin())) {
    fail("registry keys differ from the cycles");
  }
  if (lengths() != cycle_type_by_walk(successor_)) {
    fail("registry lengths differ from the walked cycle type");
  }
}

CycleType cycle_type_by_walk(std::span<const Vertex> successors) {
  const std::size_t n = successors.size();
  std::vector<bool> seen(n, false);
  CycleType lengths;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) {
      continue;
    }
    std::int64_t length = 0;
    std::size_t x = start;
    do {
      seen[x] = true;
      x = successors[x];
      ++length;
    } while (x != start);
    lengths.push_back(length);
  }
  std::sort(lengths.begin(), lengths.end(), std::greater<>{});
  return lengths;
}

}  // namespace stir
