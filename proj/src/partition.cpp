#include "stir/partition.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace stir {

namespace {

void sort_descending(std::vector<double>& v) { std::sort(v.begin(), v.end(), std::greater<>{}); }
void sort_descending(std::vector<std::int64_t>& v) { std::sort(v.begin(), v.end(), std::greater<>{}); }

}  // namespace

OrderedPartition::OrderedPartition() : parts_{1.0} {}

OrderedPartition OrderedPartition::from_lengths(std::vector<std::int64_t> lengths) {
  std::erase(lengths, 0);
  if (lengths.empty()) {
    throw std::invalid_argument("partition needs at least one positive length");
  }
  if (std::any_of(lengths.begin(), lengths.end(), [](std::int64_t l) { return l < 0; })) {
    throw std::invalid_argument("negative cycle length");
  }
  sort_descending(lengths);
  OrderedPartition p;
  p.denominator_ = std::accumulate(lengths.begin(), lengths.end(), std::int64_t{0});
  p.parts_.resize(lengths.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    p.parts_[i] = static_cast<double>(lengths[i]) / static_cast<double>(p.denominator_);
  }
  p.lengths_ = std::move(lengths);
  return p;
}

OrderedPartition OrderedPartition::from_weights(std::vector<double> weights) {
  if (std::any_of(weights.begin(), weights.end(), [](double w) { return !(w >= 0.0) || w > 1.0 + kMassTolerance; })) {
    throw std::invalid_argument("partition weights must lie in [0, 1]");
  }
  for (double& w : weights) {
    w = std::min(w, 1.0);
  }
  std::erase(weights, 0.0);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw std::invalid_argument("partition weights sum to " + std::to_string(total));
  }
  sort_descending(weights);
  OrderedPartition p;
  p.parts_ = std::move(weights);
  return p;
}

Rational OrderedPartition::exact_part(std::size_t i) const {
  if (!is_discrete()) {
    return Rational{(*this)[i]};
  }
  return make_rational(length(i), denominator_);
}

void OrderedPartition::validate() const {
  if (!std::is_sorted(parts_.begin(), parts_.end(), std::greater<>{})) {
    throw std::logic_error("partition parts are not non-increasing");
  }
  if (is_discrete()) {
    if (std::accumulate(lengths_.begin(), lengths_.end(), std::int64_t{0}) != denominator_) {
      throw std::logic_error("discrete partition lengths do not sum to N");
    }
    if (lengths_.size() != parts_.size() || !std::is_sorted(lengths_.begin(), lengths_.end(), std::greater<>{})) {
      throw std::logic_error("discrete partition lengths inconsistent with parts");
    }
    return;
  }
  const double total = std::accumulate(parts_.begin(), parts_.end(), 0.0);
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw std::logic_error("partition mass drifted to " + std::to_string(total));
  }
}

bool operator==(const OrderedPartition& a, const OrderedPartition& b) {
  if (a.is_discrete() && b.is_discrete()) {
    return a.denominator_ == b.denominator_ && a.lengths_ == b.lengths_;
  }
  return a.parts_ == b.parts_;
}

CycleTypeCounts::CycleTypeCounts(std::map<std::int64_t, std::int64_t> counts) : counts_{std::move(counts)} {
  for (auto it = counts_.begin(); it != counts_.end();) {
    if (it->first < 1 || it->second < 0) {
      throw std::invalid_argument("cycle type counts need k >= 1 and a_k >= 0");
    }
    total_ += it->first * it->second;
    it = it->second == 0 ? counts_.erase(it) : std::next(it);
  }
  if (total_ < 1) {
    throw std::invalid_argument("cycle type counts describe an empty permutation");
  }
}

CycleTypeCounts CycleTypeCounts::from_lengths(std::span<const std::int64_t> lengths) {
  std::map<std::int64_t, std::int64_t> counts;
  for (const auto l : lengths) {
    if (l < 1) {
      throw std::invalid_argument("cycle lengths must be positive");
    }
    ++counts[l];
  }
  return CycleTypeCounts{std::move(counts)};
}

CycleType CycleTypeCounts::lengths() const {
  CycleType out;
  for (auto it = counts_.rbegin(); it != counts_.rend(); ++it) {
    out.insert(out.end(), static_cast<std::size_t>(it->second), it->first);
  }
  return out;
}

double l1_distance(const OrderedPartition& p, const OrderedPartition& q) {
  if (p.is_discrete() && q.is_discrete() && p.denominator() == q.denominator()) {
    return static_cast<double>(scaled_l1_distance(p.lengths(), q.lengths())) / static_cast<double>(p.denominator());
  }
  const std::size_t n = std::max(p.size(), q.size());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += std::abs(p[i] - q[i]);
  }
  return total;
}

std::int64_t scaled_l1_distance(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  const std::size_t n = std::max(a.size(), b.size());
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t x = i < a.size() ? a[i] : 0;
    const std::int64_t y = i < b.size() ? b[i] : 0;
    total += x > y ? x - y : y - x;
  }
  return total;
}

OrderedPartition merge_map(const OrderedPartition& p, std::size_t i, std::size_t j) {
  if (!(i < j) || j >= p.size()) {
    throw std::invalid_argument("merge_map needs i < j < number of nonzero parts");
  }
  if (p.is_discrete()) {
    auto lengths = p.lengths();
    lengths[i] += lengths[j];
    lengths.erase(lengths.begin() + static_cast<std::ptrdiff_t>(j));
    return OrderedPartition::from_lengths(std::move(lengths));
  }
  auto parts = p.parts();
  parts[i] += parts[j];
  parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(j));
  sort_descending(parts);
  return OrderedPartition::from_weights(std::move(parts));
}

OrderedPartition split_map(const OrderedPartition& p, std::size_t i, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::invalid_argument("split_map needs 0 < u < 1");
  }
  if (i >= p.size()) {
    throw std::invalid_argument("split_map index out of range");
  }
  if (p.is_discrete()) {
    const double cut = u * static_cast<double>(p.length(i));
    const double rounded = std::round(cut);
    if (std::abs(cut - rounded) < 1e-9 && rounded >= 1.0 && rounded < static_cast<double>(p.length(i))) {
      return split_at(p, i, static_cast<std::int64_t>(rounded));
    }
  }
  auto parts = p.parts();
  const double piece = parts[i];
  parts[i] = u * piece;
  parts.push_back(piece - parts[i]);
  return OrderedPartition::from_weights(std::move(parts));
}

OrderedPartition split_at(const OrderedPartition& p, std::size_t i, std::int64_t cut) {
  if (!p.is_discrete()) {
    throw std::invalid_argument("split_at needs a discrete partition");
  }
  if (i >= p.size() || cut < 1 || cut >= p.length(i)) {
    throw std::invalid_argument("split_at needs a valid part and 1 <= cut < l_i");
  }
  auto lengths = p.lengths();
  lengths.push_back(lengths[i] - cut);
  lengths[i] = cut;
  return OrderedPartition::from_lengths(std::move(lengths));
}

Rational ewens_pmf(const CycleTypeCounts& a) {
  mpz_class denominator = 1;
  for (const auto& [k, count] : a.counts()) {
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), mpz_class{static_cast<long>(k)}.get_mpz_t(), static_cast<unsigned long>(count));
    mpz_class factorial;
    mpz_fac_ui(factorial.get_mpz_t(), static_cast<unsigned long>(count));
    denominator *= power * factorial;
  }
  Rational r{mpz_class{1}, denominator};
  r.canonicalize();
  return r;
}

std::vector<CycleType> integer_partitions(std::int64_t n) {
  if (n < 1) {
    throw std::invalid_argument("integer_partitions needs n >= 1");
  }
  std::vector<CycleType> out;
  CycleType current;
  std::function<void(std::int64_t, std::int64_t)> recurse = [&](std::int64_t remaining, std::int64_t largest) {
    if (remaining == 0) {
      out.push_back(current);
      return;
    }
    for (std::int64_t k = std::min(remaining, largest); k >= 1; --k) {
      current.push_back(k);
      recurse(remaining - k, k);
      current.pop_back();
    }
  };
  recurse(n, n);
  return out;
}

std::map<CycleType, Rational> ewens_law(std::int64_t n) {
  std::map<CycleType, Rational> law;
  for (auto& type : integer_partitions(n)) {
    law.emplace(type, ewens_pmf(CycleTypeCounts::from_lengths(type)));
  }
  return law;
}

OrderedPartition sample_ewens(std::int64_t n, Rng& rng) {
  if (n < 1) {
    throw std::invalid_argument("sample_ewens needs N >= 1");
  }
  std::vector<std::int64_t> lengths;
  std::int64_t remaining = n;
  while (remaining > 0) {
    const auto length = 1 + static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(remaining)));
    lengths.push_back(length);
    remaining -= length;
  }
  return OrderedPartition::from_lengths(std::move(lengths));
}

OrderedPartition sample_pd1(Rng& rng, double mass_tolerance) {
  if (!(mass_tolerance > 0.0 && mass_tolerance < 1.0)) {
    throw std::invalid_argument("sample_pd1 needs 0 < mass_tolerance < 1");
  }
  std::vector<double> parts;
  double placed = 0.0;
  double residual = 1.0;
  while (residual >= mass_tolerance) {
    const double piece = rng.uniform_open() * residual;
    parts.push_back(piece);
    placed += piece;
    residual = 1.0 - placed;
  }
  if (residual > 0.0) {
    parts.push_back(residual);
  }
  std::sort(parts.begin(), parts.end(), std::greater<>{});
  return OrderedPartition::from_weights(std::move(parts));
}

}  // namespace stir
