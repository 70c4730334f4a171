#include "stir/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace stir {

namespace {

struct WalkedCycles {
  std::vector<int> cycle_of;
  std::vector<int> position;
  std::vector<std::int64_t> length;
  std::vector<int> largest;
};

WalkedCycles walk(const std::vector<int>& image) {
  const int n = static_cast<int>(image.size());
  WalkedCycles w;
  w.cycle_of.assign(static_cast<std::size_t>(n), -1);
  w.position.assign(static_cast<std::size_t>(n), 0);
  for (int start = 0; start < n; ++start) {
    if (w.cycle_of[static_cast<std::size_t>(start)] >= 0) {
      continue;
    }
    const int id = static_cast<int>(w.length.size());
    int x = start;
    int pos = 0;
    int top = start;
    do {
      w.cycle_of[static_cast<std::size_t>(x)] = id;
      w.position[static_cast<std::size_t>(x)] = pos++;
      top = std::max(top, x);
      x = image[static_cast<std::size_t>(x)];
    } while (x != start);
    w.length.push_back(pos);
    w.largest.push_back(top);
  }
  return w;
}

CycleType type_of(const WalkedCycles& w) {
  CycleType t = w.length;
  std::sort(t.begin(), t.end(), std::greater<>{});
  return t;
}

// psi weight of cut l for an edge at separation s in a cycle of length m, in half units.
std::int64_t half_units(std::int64_t m, std::int64_t s, std::int64_t l) {
  if (2 * s == m) {
    return l == s ? 2 : 0;
  }
  return (l == s || l == m - s) ? 1 : 0;
}

// The cuts l that an edge at separation s marks, s and m - s.
std::vector<std::int64_t> cuts(std::int64_t m, std::int64_t s) {
  if (2 * s == m) {
    return {s};
  }
  return {s, m - s};
}

std::int64_t multiplicity(const CycleType& type, std::int64_t length) {
  return std::count(type.begin(), type.end(), length);
}

}  // namespace

std::map<CycleType, Rational> enumerate_cycle_type_law(int n) {
  if (n < 1) {
    throw std::invalid_argument("enumeration needs N >= 1");
  }
  if (n > kMaxEnumerationSize) {
    throw std::length_error("enumeration of S_N is limited to N <= " + std::to_string(kMaxEnumerationSize));
  }
  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 0);
  std::map<CycleType, std::int64_t> counts;
  std::int64_t total = 0;
  do {
    ++counts[type_of(walk(image))];
    ++total;
  } while (std::next_permutation(image.begin(), image.end()));
  std::map<CycleType, Rational> law;
  for (const auto& [type, count] : counts) {
    law.emplace(type, make_rational(count, total));
  }
  return law;
}

ConditionalIndicatorMoments::ConditionalIndicatorMoments(int n, Edge b, Edge c, TieLabeling labeling)
    : n_{n}, overlap_{0}, labeling_{labeling} {
  if (n < 2 || n > kMaxMomentEnumerationSize) {
    throw std::length_error("moment enumeration is limited to 2 <= N <= " +
                            std::to_string(kMaxMomentEnumerationSize));
  }
  for (const Edge& e : {b, c}) {
    if (e.first >= e.second || e.second >= static_cast<Vertex>(n)) {
      throw std::invalid_argument("vertex pairs must be distinct vertices below N");
    }
  }
  for (Vertex x : {b.first, b.second}) {
    if (x == c.first || x == c.second) {
      ++overlap_;
    }
  }

  std::vector<int> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), 0);
  do {
    const WalkedCycles w = walk(image);
    const CycleType type = type_of(w);
    Table& table = tables_[type];
    ++table.permutations;

    std::vector<std::int64_t> label(w.length.size());
    if (labeling_ == TieLabeling::exchangeable) {
      label = w.length;
    } else {
      std::vector<std::size_t> order(w.length.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(), [&w](std::size_t a, std::size_t z) {
        return std::pair{w.length[a], w.largest[a]} > std::pair{w.length[z], w.largest[z]};
      });
      for (std::size_t r = 0; r < order.size(); ++r) {
        label[order[r]] = static_cast<std::int64_t>(r);
      }
    }
    auto pair_storage_key = [&](int a, int z) {
      const std::int64_t la = label[static_cast<std::size_t>(a)];
      const std::int64_t lz = label[static_cast<std::size_t>(z)];
      if (labeling_ == TieLabeling::exchangeable) {
        return Key{std::max(la, lz), std::min(la, lz), 0};
      }
      return Key{std::min(la, lz), std::max(la, lz), 0};
    };

    const int ab = w.cycle_of[b.first];
    const int bb = w.cycle_of[b.second];
    const int ac = w.cycle_of[c.first];
    const int bc = w.cycle_of[c.second];
    if (ab != bb) {
      ++table.phi[pair_storage_key(ab, bb)];
      if (ac != bc && std::minmax(ab, bb) == std::minmax(ac, bc)) {
        ++table.phi_phi[pair_storage_key(ab, bb)];
      }
      continue;
    }
    const std::int64_t m = w.length[static_cast<std::size_t>(ab)];
    const std::int64_t lab = label[static_cast<std::size_t>(ab)];
    auto separation = [&](const Edge& e) {
      return static_cast<std::int64_t>((w.position[e.second] - w.position[e.first] + m) % m);
    };
    const std::vector<std::int64_t> cuts_b = cuts(m, separation(b));
    for (std::int64_t l : cuts_b) {
      table.psi[{lab, l, 0}] += half_units(m, separation(b), l);
    }
    if (ac == ab && bc == ab) {
      for (std::int64_t l : cuts_b) {
        for (std::int64_t l2 : cuts(m, separation(c))) {
          table.psi_psi[{lab, l, l2}] += half_units(m, separation(b), l) * half_units(m, separation(c), l2);
        }
      }
    }
  } while (std::next_permutation(image.begin(), image.end()));
}

const ConditionalIndicatorMoments::Table& ConditionalIndicatorMoments::table(const CycleType& type) const {
  const auto it = tables_.find(type);
  if (it == tables_.end()) {
    throw std::invalid_argument("cycle type is not feasible for this N");
  }
  return it->second;
}

std::int64_t ConditionalIndicatorMoments::class_size(const CycleType& type) const {
  return table(type).permutations;
}

Rational ConditionalIndicatorMoments::single_scale(const CycleType& type, std::size_t i) const {
  const std::int64_t perms = table(type).permutations;
  if (labeling_ == TieLabeling::deterministic) {
    return make_rational(1, perms);
  }
  return make_rational(1, multiplicity(type, type[i]) * perms);
}

Rational ConditionalIndicatorMoments::pair_scale(const CycleType& type, std::size_t i, std::size_t j) const {
  const std::int64_t perms = table(type).permutations;
  if (labeling_ == TieLabeling::deterministic) {
    return make_rational(1, perms);
  }
  const std::int64_t gi = multiplicity(type, type[i]);
  if (type[i] != type[j]) {
    return make_rational(1, gi * multiplicity(type, type[j]) * perms);
  }
  return make_rational(2, gi * (gi - 1) * perms);
}

ConditionalIndicatorMoments::Key ConditionalIndicatorMoments::pair_key(const CycleType& type, std::size_t i,
                                                                       std::size_t j) const {
  if (!(i < j && j < type.size())) {
    throw std::invalid_argument("cycle pair needs i < j within the cycle type");
  }
  if (labeling_ == TieLabeling::exchangeable) {
    return Key{type[i], type[j], 0};
  }
  return Key{static_cast<std::int64_t>(i), static_cast<std::int64_t>(j), 0};
}

namespace {

std::int64_t lookup(const std::map<std::array<std::int64_t, 3>, std::int64_t>& m, const std::array<std::int64_t, 3>& k) {
  const auto it = m.find(k);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

Rational ConditionalIndicatorMoments::phi(const CycleType& type, std::size_t i, std::size_t j) const {
  const Key key = pair_key(type, i, j);
  return lookup(table(type).phi, key) * pair_scale(type, i, j);
}

Rational ConditionalIndicatorMoments::phi_phi(const CycleType& type, std::size_t i, std::size_t j) const {
  const Key key = pair_key(type, i, j);
  return lookup(table(type).phi_phi, key) * pair_scale(type, i, j);
}

Rational ConditionalIndicatorMoments::psi(const CycleType& type, std::size_t i, std::int64_t l) const {
  if (i >= type.size()) {
    throw std::invalid_argument("cycle index out of range");
  }
  const std::int64_t label = labeling_ == TieLabeling::exchangeable ? type[i] : static_cast<std::int64_t>(i);
  return Rational{lookup(table(type).psi, {label, l, 0}) * single_scale(type, i) / 2};
}

Rational ConditionalIndicatorMoments::psi_psi(const CycleType& type, std::size_t i, std::int64_t l,
                                              std::int64_t l2) const {
  if (i >= type.size()) {
    throw std::invalid_argument("cycle index out of range");
  }
  const std::int64_t label = labeling_ == TieLabeling::exchangeable ? type[i] : static_cast<std::int64_t>(i);
  return Rational{lookup(table(type).psi_psi, {label, l, l2}) * single_scale(type, i) / 4};
}

}  // namespace stir
