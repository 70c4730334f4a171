#include "stir/stirring.hpp"

#include <cmath>
#include <stdexcept>

#include "stir/union_jack.hpp"

namespace stir {

std::int64_t InstantaneousRates::merge_count(std::size_t i, std::size_t j) const {
  if (i > j) {
    std::swap(i, j);
  }
  const auto it = merge_edges.find({i, j});
  return it == merge_edges.end() ? 0 : it->second;
}

std::int64_t InstantaneousRates::split_half_units(std::size_t j, std::int64_t k) const {
  if (j >= split_halves.size() || k < 1 || k > static_cast<std::int64_t>(split_halves[j].size())) {
    return 0;
  }
  return split_halves[j][static_cast<std::size_t>(k - 1)];
}

Rational InstantaneousRates::x(std::size_t i, std::size_t j) const {
  if (i == j) {
    return Rational{0};
  }
  return make_rational(merge_count(i, j), edge_count);
}

Rational InstantaneousRates::y(std::size_t j, std::int64_t k) const {
  return make_rational(split_half_units(j, k), 2 * edge_count);
}

double InstantaneousRates::x_value(std::size_t i, std::size_t j) const {
  if (i == j) {
    return 0.0;
  }
  return static_cast<double>(merge_count(i, j)) / static_cast<double>(edge_count);
}

double InstantaneousRates::y_value(std::size_t j, std::int64_t k) const {
  return static_cast<double>(split_half_units(j, k)) / static_cast<double>(2 * edge_count);
}

Rational InstantaneousRates::total() const {
  std::int64_t halves = 0;
  for (const auto& [pair, count] : merge_edges) {
    halves += 2 * count;
  }
  for (const auto& row : split_halves) {
    for (std::int64_t h : row) {
      halves += h;
    }
  }
  return make_rational(halves, 2 * edge_count);
}

RateProfile InstantaneousRates::y_profile() const {
  RateProfile profile;
  profile.reserve(split_halves.size());
  for (const auto& row : split_halves) {
    profile.push_back(RateRow{2 * edge_count, row});
  }
  return profile;
}

InstantaneousRates instantaneous_rates(const CyclePermutation& perm, const TorusLattice& lattice) {
  if (perm.size() != lattice.vertex_count()) {
    throw std::invalid_argument("permutation and lattice sizes differ");
  }
  InstantaneousRates rates;
  rates.vertex_count = static_cast<std::int64_t>(perm.size());
  rates.edge_count = static_cast<std::int64_t>(lattice.edge_count());
  rates.lengths = perm.lengths();
  rates.split_halves.resize(rates.lengths.size());
  for (std::size_t j = 0; j < rates.lengths.size(); ++j) {
    rates.split_halves[j].assign(static_cast<std::size_t>(rates.lengths[j] - 1), 0);
  }
  for (const Edge& b : lattice.edges()) {
    if (perm.same_cycle(b.first, b.second)) {
      auto& row = rates.split_halves[perm.cycle_index(b.first)];
      const auto m = row.size() + 1;
      const std::size_t s = perm.separation(b.first, b.second);
      if (2 * s == m) {
        row[s - 1] += 2;
      } else {
        row[s - 1] += 1;
        row[m - s - 1] += 1;
      }
    } else {
      std::size_t i = perm.cycle_index(b.first);
      std::size_t j = perm.cycle_index(b.second);
      if (i > j) {
        std::swap(i, j);
      }
      ++rates.merge_edges[{i, j}];
    }
  }
  return rates;
}

StirringRun run_stirring(const TorusLattice& lattice, CyclePermutation& perm, double T, Rng& rng,
                         const StirringObserver& observer) {
  if (!(T >= 0.0)) {
    throw std::invalid_argument("horizon T must be nonnegative");
  }
  StirringRun run;
  double t = 0.0;
  while (true) {
    t += rng.exponential();
    if (t > T) {
      break;
    }
    const Edge& b = lattice.sample_edge(rng);
    const TranspositionEffect effect = perm.apply_transposition(b);
    ++run.events;
    ++run.proposals;
    if (observer) {
      observer(t, effect, perm);
    }
  }
  return run;
}

int weighted_rate_half_exponent(const CyclePermutation& perm, const Edge& b) {
  return perm.same_cycle(b.first, b.second) ? 1 : -1;
}

StirringRun run_weighted_stirring(const TorusLattice& lattice, double theta, CyclePermutation& perm, double T,
                                  Rng& rng, const StirringObserver& observer) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("theta must be positive");
  }
  if (!(T >= 0.0)) {
    throw std::invalid_argument("horizon T must be nonnegative");
  }
  const double root = std::sqrt(theta);
  const double candidate_rate = std::max(root, 1.0 / root);
  const double accept_split = root / candidate_rate;
  const double accept_merge = (1.0 / root) / candidate_rate;
  StirringRun run;
  double t = 0.0;
  while (true) {
    t += rng.exponential(candidate_rate);
    if (t > T) {
      break;
    }
    const Edge& b = lattice.sample_edge(rng);
    ++run.proposals;
    const double accept = weighted_rate_half_exponent(perm, b) > 0 ? accept_split : accept_merge;
    if (accept < 1.0 && !rng.bernoulli(accept)) {
      continue;
    }
    const TranspositionEffect effect = perm.apply_transposition(b);
    ++run.events;
    if (observer) {
      observer(t, effect, perm);
    }
  }
  return run;
}

namespace {

std::int64_t total_of(const CycleType& lengths) {
  std::int64_t n = 0;
  for (std::int64_t l : lengths) {
    if (l < 1) {
      throw std::invalid_argument("cycle lengths must be positive");
    }
    n += l;
  }
  return n;
}

std::int64_t falling(std::int64_t n, int terms) {
  std::int64_t out = 1;
  for (int r = 0; r < terms; ++r) {
    out *= n - r;
  }
  return out;
}

void check_pair(const CycleType& lengths, std::size_t i, std::size_t j) {
  if (!(i < j && j < lengths.size())) {
    throw std::invalid_argument("cycle pair needs i < j within the cycle type");
  }
}

void check_overlap(int overlap, std::int64_t n) {
  if (overlap < 0 || overlap > 2) {
    throw std::invalid_argument("edge overlap must be 0, 1 or 2");
  }
  if (n < 4 - overlap) {
    throw std::invalid_argument("too few vertices for two edges with this overlap");
  }
}

}  // namespace

Rational expected_phi(const CycleType& lengths, std::size_t i, std::size_t j) {
  check_pair(lengths, i, j);
  const std::int64_t n = total_of(lengths);
  return make_rational(2 * lengths[i] * lengths[j], falling(n, 2));
}

Rational expected_psi(const CycleType& lengths, std::size_t i, std::int64_t l) {
  if (i >= lengths.size()) {
    throw std::invalid_argument("cycle index out of range");
  }
  const std::int64_t n = total_of(lengths);
  if (n < 2 || l < 1 || l >= lengths[i]) {
    return Rational{0};
  }
  return make_rational(lengths[i], falling(n, 2));
}

Rational expected_phi_phi(const CycleType& lengths, std::size_t i, std::size_t j, int overlap) {
  check_pair(lengths, i, j);
  const std::int64_t n = total_of(lengths);
  check_overlap(overlap, n);
  const std::int64_t li = lengths[i];
  const std::int64_t lj = lengths[j];
  switch (overlap) {
    case 2:
      return expected_phi(lengths, i, j);
    case 1:
      return make_rational(li * lj * (li + lj - 2), falling(n, 3));
    default:
      return make_rational(4 * li * lj * (li - 1) * (lj - 1), falling(n, 4));
  }
}

Rational expected_psi_psi(const CycleType& lengths, std::size_t i, std::int64_t l, std::int64_t l2, int overlap) {
  if (i >= lengths.size()) {
    throw std::invalid_argument("cycle index out of range");
  }
  const std::int64_t n = total_of(lengths);
  check_overlap(overlap, n);
  const std::int64_t m = lengths[i];
  if (l < 1 || l2 < 1 || m < std::max(l, l2) + 1) {
    return Rational{0};
  }
  const UnionJackClass cls = classify_union_jack(m, l, l2);
  switch (overlap) {
    case 2:
      if (cls == UnionJackClass::centre) {
        return make_rational(m, falling(n, 2));
      }
      if (cls == UnionJackClass::st_andrew) {
        return make_rational(m, 2 * falling(n, 2));
      }
      return Rational{0};
    case 1:
      if (cls == UnionJackClass::centre) {
        return Rational{0};
      }
      return make_rational(cls == UnionJackClass::st_andrew ? m : 2 * m, 2 * falling(n, 3));
    default: {
      std::int64_t c = 4;
      if (cls == UnionJackClass::centre) {
        c = 2;
      } else if (cls == UnionJackClass::st_andrew) {
        c = 3;
      }
      return make_rational(m * (m - c), falling(n, 4));
    }
  }
}

}  // namespace stir
