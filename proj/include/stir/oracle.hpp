#pragma once

#include <array>
#include <cstdint>
#include <map>

#include "stir/partition.hpp"
#include "stir/rational.hpp"
#include "stir/torus.hpp"
#include "stir/union_jack.hpp"

namespace stir {

// Largest N for which the full symmetric group is enumerated.
inline constexpr int kMaxEnumerationSize = 10;
inline constexpr int kMaxMomentEnumerationSize = 8;

// Cycle-type law of a uniform permutation of N elements by listing all N!
// permutations. Throws std::length_error past kMaxEnumerationSize.
std::map<CycleType, Rational> enumerate_cycle_type_law(int n);

// How cycles of equal length receive their rank labels. `exchangeable`
// labels tied cycles by a uniform random order; `deterministic` uses the
// registry rule (longer first, ties by larger maximal element).
enum class TieLabeling { exchangeable, deterministic };

// Exact conditional expectations of the merge indicators phi and split
// indicators psi for two vertex pairs b and c, given the cycle type, by
// enumerating every permutation of N <= 8 elements. Indices are 0-based
// ranks; cut positions l are 1-based.
class ConditionalIndicatorMoments {
 public:
  ConditionalIndicatorMoments(int n, Edge b, Edge c, TieLabeling labeling = TieLabeling::exchangeable);

  int size() const { return n_; }
  int overlap() const { return overlap_; }
  bool feasible(const CycleType& type) const { return tables_.contains(type); }
  // Number of permutations with this cycle type.
  std::int64_t class_size(const CycleType& type) const;

  Rational phi(const CycleType& type, std::size_t i, std::size_t j) const;              // pair b
  Rational phi_phi(const CycleType& type, std::size_t i, std::size_t j) const;          // pairs b, c
  Rational psi(const CycleType& type, std::size_t i, std::int64_t l) const;             // pair b
  Rational psi_psi(const CycleType& type, std::size_t i, std::int64_t l, std::int64_t l2) const;

 private:
  using Key = std::array<std::int64_t, 3>;
  struct Table {
    std::int64_t permutations = 0;
    std::map<Key, std::int64_t> phi;      // (label, label, 0)
    std::map<Key, std::int64_t> phi_phi;  // (label, label, 0)
    std::map<Key, std::int64_t> psi;      // (label, l, 0), half units
    std::map<Key, std::int64_t> psi_psi;  // (label, l, l2), quarter units
  };

  const Table& table(const CycleType& type) const;
  // Probability numerator/denominator that a given cycle (pair) carries rank i (ranks i, j).
  Rational pair_scale(const CycleType& type, std::size_t i, std::size_t j) const;
  Rational single_scale(const CycleType& type, std::size_t i) const;
  Key pair_key(const CycleType& type, std::size_t i, std::size_t j) const;

  int n_;
  int overlap_;
  TieLabeling labeling_;
  std::map<CycleType, Table> tables_;
};

}  // namespace stir
