#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stir/rational.hpp"

namespace stir {

// One cycle's split profile: value at cut k (1..m-1) is numerators[k-1] / denominator.
struct RateRow {
  std::int64_t denominator = 1;
  std::vector<std::int64_t> numerators;

  std::int64_t cycle_length() const { return static_cast<std::int64_t>(numerators.size()) + 1; }
  Rational at(std::int64_t k) const;
  double value(std::int64_t k) const;
  Rational total() const;
};

using RateProfile = std::vector<RateRow>;

// The weights w_m(k, l) with cutoff M. For m < M + 2 every weight is
// 1/(m-1); otherwise the row is a band of half width M with weight
// 1/(2M+1) off the diagonal and the remaining mass on the diagonal.
class SmoothingKernel {
 public:
  explicit SmoothingKernel(std::int64_t cutoff);

  std::int64_t cutoff() const { return cutoff_; }
  bool uniform_rows(std::int64_t m) const { return m < cutoff_ + 2; }

  // w_m(k, l) = weight_numerator / weight_denominator(m).
  std::int64_t weight_denominator(std::int64_t m) const;
  std::int64_t weight_numerator(std::int64_t m, std::int64_t k, std::int64_t l) const;
  Rational weight(std::int64_t m, std::int64_t k, std::int64_t l) const;
  double weight_value(std::int64_t m, std::int64_t k, std::int64_t l) const;

 private:
  void check(std::int64_t m, std::int64_t k, std::int64_t l) const;
  std::int64_t cutoff_;
};

Rational kernel_weight(std::int64_t cutoff, std::int64_t m, std::int64_t k, std::int64_t l);

// Z_{j,k} = sum_l w_m(k, l) Y_{j,l} row by row, m the row's cycle length.
RateRow smooth_row(const RateRow& y, const SmoothingKernel& kernel);
RateProfile smoothed_split_rates(const RateProfile& y, const SmoothingKernel& kernel);

using WeightFunction = std::function<Rational(std::int64_t m, std::int64_t k, std::int64_t l)>;

struct KernelLawReport {
  bool symmetric = true;
  bool row_stochastic = true;
  bool banded = true;
  std::string first_failure;

  bool ok() const { return symmetric && row_stochastic && banded; }
};

// Exact check of symmetry, unit row sums and band width for 2 <= m <= m_max.
// The weight function is a parameter so a corrupted table can be fed in.
KernelLawReport check_kernel_laws(std::int64_t cutoff, std::int64_t m_max, const WeightFunction& weight);
// The same laws for the kernel itself, on its integer numerators.
KernelLawReport check_kernel_laws(const SmoothingKernel& kernel, std::int64_t m_max);

}  // namespace stir
