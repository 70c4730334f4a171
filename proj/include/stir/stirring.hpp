#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "stir/cycle_permutation.hpp"
#include "stir/kernel.hpp"
#include "stir/partition.hpp"
#include "stir/rational.hpp"
#include "stir/rng.hpp"
#include "stir/torus.hpp"

namespace stir {

// The observables X (merge) and Y (split) of a permutation on a lattice,
// kept as exact edge counts. Cycle indices are registry indices.
//
// X_{ij} = (#edges joining cycles i < j) / E and
// Y_{jk} = (#half units at cut k of cycle j) / (2E), where an edge at
// separation s in a cycle of length m adds one half unit at s and one at
// m - s, or two at s when s = m/2. E is the lattice edge count.
struct InstantaneousRates {
  std::int64_t vertex_count = 0;
  std::int64_t edge_count = 0;
  CycleType lengths;
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> merge_edges;
  std::vector<std::vector<std::int64_t>> split_halves;  // [j][k - 1], k = 1..l_j - 1

  std::int64_t merge_count(std::size_t i, std::size_t j) const;
  std::int64_t split_half_units(std::size_t j, std::int64_t k) const;

  Rational x(std::size_t i, std::size_t j) const;
  Rational y(std::size_t j, std::int64_t k) const;
  double x_value(std::size_t i, std::size_t j) const;
  double y_value(std::size_t j, std::int64_t k) const;
  // sum_{i<j} X + sum_{j,k} Y
  Rational total() const;
  // Y as integer rows over the common denominator 2E.
  RateProfile y_profile() const;
};

InstantaneousRates instantaneous_rates(const CyclePermutation& perm, const TorusLattice& lattice);

using StirringObserver = std::function<void(double t, const TranspositionEffect& effect, const CyclePermutation& perm)>;

struct StirringRun {
  std::int64_t events = 0;     // executed transpositions
  std::int64_t proposals = 0;  // candidate events (equal to events without thinning)
};

// Slowed stirring: unit total jump rate, a uniform edge per event.
StirringRun run_stirring(const TorusLattice& lattice, CyclePermutation& perm, double T, Rng& rng,
                         const StirringObserver& observer = {});

// Stirring reweighted by sqrt(theta)^{change in cycle count}, by thinning a
// candidate stream of rate max(sqrt(theta), 1/sqrt(theta)). At theta = 1 it
// consumes the random stream exactly like run_stirring.
StirringRun run_weighted_stirring(const TorusLattice& lattice, double theta, CyclePermutation& perm, double T,
                                  Rng& rng, const StirringObserver& observer = {});

// The weighted chain's jump rate from perm along edge b, as a power of theta
// in half units: rate = (1/E) theta^{half_exponent / 2}.
int weighted_rate_half_exponent(const CyclePermutation& perm, const Edge& b);

// Closed-form conditional moments given the cycle type, 0-based indices.
Rational expected_phi(const CycleType& lengths, std::size_t i, std::size_t j);
Rational expected_psi(const CycleType& lengths, std::size_t i, std::int64_t l);
Rational expected_phi_phi(const CycleType& lengths, std::size_t i, std::size_t j, int overlap);
Rational expected_psi_psi(const CycleType& lengths, std::size_t i, std::int64_t l, std::int64_t l2, int overlap);

}  // namespace stir
