#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "stir/rational.hpp"
#include "stir/rng.hpp"

namespace stir {

// Descending integer cycle lengths; the l-encoding of an element of Omega^N.
using CycleType = std::vector<std::int64_t>;

// An ordered partition of one. Either real-valued (an element of Omega) or
// discrete with denominator N, in which case every part is l_i / N with an
// integer l_i and all arithmetic on it is exact.
class OrderedPartition {
 public:
  static constexpr double kMassTolerance = 1e-12;

  OrderedPartition();  // the trivial partition (1)

  // Omega^N from unordered positive integer lengths; N is their sum.
  static OrderedPartition from_lengths(std::vector<std::int64_t> lengths);
  // Omega from unordered nonnegative weights summing to one within tolerance.
  // Zero weights are dropped.
  static OrderedPartition from_weights(std::vector<double> weights);

  bool is_discrete() const { return denominator_ > 0; }
  // N for a discrete partition, 0 otherwise.
  std::int64_t denominator() const { return denominator_; }
  std::size_t size() const { return parts_.size(); }
  // p_i with zero padding past the last nonzero part.
  double operator[](std::size_t i) const { return i < parts_.size() ? parts_[i] : 0.0; }
  const std::vector<double>& parts() const { return parts_; }
  // Integer lengths; empty unless discrete.
  const std::vector<std::int64_t>& lengths() const { return lengths_; }
  std::int64_t length(std::size_t i) const { return i < lengths_.size() ? lengths_[i] : 0; }
  Rational exact_part(std::size_t i) const;

  // Throws std::logic_error if any invariant fails.
  void validate() const;

  friend bool operator==(const OrderedPartition& a, const OrderedPartition& b);

 private:
  std::vector<double> parts_;
  std::vector<std::int64_t> lengths_;
  std::int64_t denominator_ = 0;
};

// The a-encoding: a_k = number of cycles of length k.
class CycleTypeCounts {
 public:
  explicit CycleTypeCounts(std::map<std::int64_t, std::int64_t> counts);
  static CycleTypeCounts from_lengths(std::span<const std::int64_t> lengths);

  const std::map<std::int64_t, std::int64_t>& counts() const { return counts_; }
  std::int64_t total() const { return total_; }  // sum k a_k
  CycleType lengths() const;

 private:
  std::map<std::int64_t, std::int64_t> counts_;
  std::int64_t total_ = 0;
};

// Sum |p_i - q_i| over the zero-padded sequences.
double l1_distance(const OrderedPartition& p, const OrderedPartition& q);
// N * d(p, q) for two partitions of the same N; exact.
std::int64_t scaled_l1_distance(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

// M_{ij}: merge parts i < j (0-based) and re-sort.
OrderedPartition merge_map(const OrderedPartition& p, std::size_t i, std::size_t j);
// S_i^u: split part i into u p_i and (1-u) p_i, 0 < u < 1, and re-sort. A
// discrete partition stays discrete when u p_i N is an integer.
OrderedPartition split_map(const OrderedPartition& p, std::size_t i, double u);
// Exact discrete split of part i into lengths cut and l_i - cut.
OrderedPartition split_at(const OrderedPartition& p, std::size_t i, std::int64_t cut);

// Ewens weight (prod_j j^{a_j} a_j!)^{-1} of a cycle type.
Rational ewens_pmf(const CycleTypeCounts& a);
// All integer partitions of n, each in descending order.
std::vector<CycleType> integer_partitions(std::int64_t n);
// The full Ewens law on Omega^N keyed by cycle type.
std::map<CycleType, Rational> ewens_law(std::int64_t n);

// Cycle type of a uniform permutation of N elements. Uses the Feller
// construction: the cycle through the first unplaced element has a length
// uniform on the number of unplaced elements.
OrderedPartition sample_ewens(std::int64_t n, Rng& rng);
// PD(1) via uniform stick breaking, truncated when the residual mass falls
// below mass_tolerance; the residual becomes the final part.
OrderedPartition sample_pd1(Rng& rng, double mass_tolerance = 1e-9);

}  // namespace stir
