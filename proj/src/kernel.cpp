#include "stir/kernel.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace stir {

Rational RateRow::at(std::int64_t k) const {
  if (k < 1 || k >= cycle_length()) {
    return Rational{0};
  }
  return make_rational(numerators[static_cast<std::size_t>(k - 1)], denominator);
}

double RateRow::value(std::int64_t k) const {
  if (k < 1 || k >= cycle_length()) {
    return 0.0;
  }
  return static_cast<double>(numerators[static_cast<std::size_t>(k - 1)]) / static_cast<double>(denominator);
}

Rational RateRow::total() const {
  std::int64_t sum = 0;
  for (std::int64_t v : numerators) {
    sum += v;
  }
  return make_rational(sum, denominator);
}

SmoothingKernel::SmoothingKernel(std::int64_t cutoff) : cutoff_{cutoff} {
  if (cutoff < 1) {
    throw std::invalid_argument("kernel cutoff M must be at least 1");
  }
}

void SmoothingKernel::check(std::int64_t m, std::int64_t k, std::int64_t l) const {
  if (m < 2 || k < 1 || l < 1 || k >= m || l >= m) {
    throw std::invalid_argument("kernel weight needs m >= 2 and 1 <= k, l <= m - 1");
  }
}

std::int64_t SmoothingKernel::weight_denominator(std::int64_t m) const {
  if (m < 2) {
    throw std::invalid_argument("kernel weight needs m >= 2");
  }
  return uniform_rows(m) ? m - 1 : 2 * cutoff_ + 1;
}

std::int64_t SmoothingKernel::weight_numerator(std::int64_t m, std::int64_t k, std::int64_t l) const {
  check(m, k, l);
  if (uniform_rows(m)) {
    return 1;
  }
  const std::int64_t gap = k > l ? k - l : l - k;
  if (gap > cutoff_) {
    return 0;
  }
  if (gap > 0) {
    return 1;
  }
  const std::int64_t neighbours = std::min(cutoff_, k - 1) + std::min(cutoff_, m - 1 - k);
  return 2 * cutoff_ + 1 - neighbours;
}

Rational SmoothingKernel::weight(std::int64_t m, std::int64_t k, std::int64_t l) const {
  return make_rational(weight_numerator(m, k, l), weight_denominator(m));
}

double SmoothingKernel::weight_value(std::int64_t m, std::int64_t k, std::int64_t l) const {
  return static_cast<double>(weight_numerator(m, k, l)) / static_cast<double>(weight_denominator(m));
}

Rational kernel_weight(std::int64_t cutoff, std::int64_t m, std::int64_t k, std::int64_t l) {
  return SmoothingKernel{cutoff}.weight(m, k, l);
}

RateRow smooth_row(const RateRow& y, const SmoothingKernel& kernel) {
  const std::int64_t m = y.cycle_length();
  RateRow z;
  if (m < 2) {
    return z;
  }
  z.denominator = y.denominator * kernel.weight_denominator(m);
  z.numerators.assign(y.numerators.size(), 0);
  if (kernel.uniform_rows(m)) {
    std::int64_t sum = 0;
    for (std::int64_t v : y.numerators) {
      sum += v;
    }
    std::fill(z.numerators.begin(), z.numerators.end(), sum);
    return z;
  }
  const std::int64_t M = kernel.cutoff();
  for (std::int64_t l = 1; l < m; ++l) {
    const std::int64_t yl = y.numerators[static_cast<std::size_t>(l - 1)];
    if (yl == 0) {
      continue;
    }
    for (std::int64_t k = std::max<std::int64_t>(1, l - M); k <= std::min(m - 1, l + M); ++k) {
      z.numerators[static_cast<std::size_t>(k - 1)] += kernel.weight_numerator(m, k, l) * yl;
    }
  }
  return z;
}

RateProfile smoothed_split_rates(const RateProfile& y, const SmoothingKernel& kernel) {
  RateProfile z;
  z.reserve(y.size());
  for (const RateRow& row : y) {
    z.push_back(smooth_row(row, kernel));
  }
  return z;
}

KernelLawReport check_kernel_laws(std::int64_t cutoff, std::int64_t m_max, const WeightFunction& weight) {
  KernelLawReport report;
  auto note = [&report](const std::string& what) {
    if (report.first_failure.empty()) {
      report.first_failure = what;
    }
  };
  for (std::int64_t m = 2; m <= m_max; ++m) {
    const std::string tag = "M=" + std::to_string(cutoff) + " m=" + std::to_string(m);
    for (std::int64_t k = 1; k < m; ++k) {
      Rational row_sum{0};
      for (std::int64_t l = 1; l < m; ++l) {
        const Rational w = weight(m, k, l);
        row_sum += w;
        if (l > k && w != weight(m, l, k)) {
          report.symmetric = false;
          note(tag + ": asymmetric at (" + std::to_string(k) + "," + std::to_string(l) + ")");
        }
        const std::int64_t gap = k > l ? k - l : l - k;
        if (m >= cutoff + 2 && gap > cutoff && w != 0) {
          report.banded = false;
          note(tag + ": weight outside the band at (" + std::to_string(k) + "," + std::to_string(l) + ")");
        }
        if (w < 0) {
          report.row_stochastic = false;
          note(tag + ": negative weight");
        }
      }
      if (row_sum != 1) {
        report.row_stochastic = false;
        note(tag + ": row " + std::to_string(k) + " sums to " + row_sum.get_str());
      }
    }
  }
  return report;
}

KernelLawReport check_kernel_laws(const SmoothingKernel& kernel, std::int64_t m_max) {
  KernelLawReport report;
  const std::int64_t M = kernel.cutoff();
  for (std::int64_t m = 2; m <= m_max && report.ok(); ++m) {
    const std::int64_t den = kernel.weight_denominator(m);
    const std::string tag = "M=" + std::to_string(M) + " m=" + std::to_string(m);
    for (std::int64_t k = 1; k < m; ++k) {
      std::int64_t row_sum = 0;
      for (std::int64_t l = 1; l < m; ++l) {
        const std::int64_t w = kernel.weight_numerator(m, k, l);
        row_sum += w;
        if (w < 0) {
          report.row_stochastic = false;
        }
        if (l > k && w != kernel.weight_numerator(m, l, k)) {
          report.symmetric = false;
        }
        const std::int64_t gap = k > l ? k - l : l - k;
        if (m >= M + 2 && gap > M && w != 0) {
          report.banded = false;
        }
      }
      if (row_sum != den) {
        report.row_stochastic = false;
      }
      if (!report.ok() && report.first_failure.empty()) {
        report.first_failure = tag + " row " + std::to_string(k);
      }
    }
  }
  return report;
}

}  // namespace stir
