#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "stir/partition.hpp"
#include "stir/rational.hpp"
#include "stir/rng.hpp"

namespace stir {

// Mean-field rates of the discrete split-merge chain on Omega^N, exact over
// the common denominator N(N-1):
//   U_{ij} = 2 l_i l_j / (N(N-1)) for i < j,
//   V_{jk} = l_j / (N(N-1)) for 1 <= k < l_j.
// Indices are 0-based; parts past the end have length zero.
class MeanFieldRates {
 public:
  explicit MeanFieldRates(CycleType lengths);
  static MeanFieldRates of(const OrderedPartition& p);

  std::int64_t vertex_count() const { return n_; }
  const CycleType& lengths() const { return lengths_; }
  std::int64_t denominator() const { return n_ * (n_ - 1); }

  std::int64_t merge_numerator(std::size_t i, std::size_t j) const;
  std::int64_t split_numerator(std::size_t j, std::int64_t k) const;
  Rational merge(std::size_t i, std::size_t j) const;
  Rational split(std::size_t j, std::int64_t k) const;
  double merge_value(std::size_t i, std::size_t j) const;
  double split_value(std::size_t j, std::int64_t k) const;
  Rational total() const;

 private:
  CycleType lengths_;
  std::int64_t n_ = 0;
};

// A jump of a partition: merge parts i < j, or split part i into cut and
// l_i - cut (discrete) or u p_i and (1 - u) p_i (canonical).
struct Jump {
  enum class Kind { merge, split };
  Kind kind = Kind::merge;
  std::size_t i = 0;
  std::size_t j = 0;
  std::int64_t cut = 0;
  double u = 0.0;

  static Jump merge(std::size_t i, std::size_t j) { return Jump{Kind::merge, i, j, 0, 0.0}; }
  static Jump split(std::size_t i, std::int64_t cut) { return Jump{Kind::split, i, 0, cut, 0.0}; }
  friend bool operator==(const Jump&, const Jump&) = default;
};

// Exact inverse CDF over merges in (i, j) order and then splits in (j, k) order.
Jump sample_discrete_jump(const MeanFieldRates& rates, Rng& rng);
CycleType apply_jump(const CycleType& lengths, const Jump& jump);

OrderedPartition step_discrete(const OrderedPartition& p, Rng& rng);
// Draws i, j independently with probabilities p; i != j merges, i == j splits
// at a uniform u in (0, 1). Parts below the mass tolerance are dropped.
OrderedPartition step_canonical(const OrderedPartition& p, Rng& rng);

enum class ChainKind { discrete, canonical };

using ChainObserver = std::function<void(double t, const OrderedPartition& p)>;

struct ChainRun {
  OrderedPartition final_state;
  std::int64_t events = 0;
};

// Jumps at the arrivals of a rate-one Poisson clock on [0, T]. The observer
// sees the initial state at t = 0 and the state after every jump.
ChainRun run_chain(ChainKind kind, const OrderedPartition& p0, double T, Rng& rng, const ChainObserver& observer = {});

}  // namespace stir
