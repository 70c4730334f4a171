#include <algorithm>
#include <map>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "stir/oracle.hpp"
#include "stir/partition.hpp"
#include "stir/stats.hpp"

using namespace stir;

namespace {

OrderedPartition random_partition(Rng& rng, std::size_t parts) {
  std::vector<double> w(parts);
  double sum = 0.0;
  for (double& x : w) {
    x = rng.uniform_open();
    sum += x;
  }
  for (double& x : w) {
    x /= sum;
  }
  return OrderedPartition::from_weights(w);
}

void check_valid(const OrderedPartition& p) {
  CHECK_NOTHROW(p.validate());
  CHECK(std::ranges::is_sorted(p.parts(), std::greater<>{}));
  CHECK(std::abs(std::accumulate(p.parts().begin(), p.parts().end(), 0.0) - 1.0) < 1e-12);
}

}  // namespace

TEST_CASE("l1 distance examples") {
  const auto half = OrderedPartition::from_weights({0.5, 0.5});
  CHECK(l1_distance(half, half) == 0.0);
  CHECK(l1_distance(OrderedPartition{}, half) == doctest::Approx(1.0));
}

TEST_CASE("l1 distance is the infimum over bijections") {
  Rng rng{21};
  for (int s = 0; s < 200; ++s) {
    const auto p = random_partition(rng, 5);
    const auto q = random_partition(rng, 1 + rng.uniform_index(6));
    std::vector<std::size_t> pi(6);
    std::iota(pi.begin(), pi.end(), 0);
    double best = 1e9;
    do {
      double sum = 0.0;
      for (std::size_t i = 0; i < 6; ++i) {
        sum += std::abs(p[i] - q[pi[i]]);
      }
      best = std::min(best, sum);
    } while (std::ranges::next_permutation(pi).found);
    CHECK(l1_distance(p, q) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("l1 distance is a metric") {
  Rng rng{22};
  for (int s = 0; s < 1000; ++s) {
    const auto a = random_partition(rng, 1 + rng.uniform_index(6));
    const auto b = random_partition(rng, 1 + rng.uniform_index(6));
    const auto c = random_partition(rng, 1 + rng.uniform_index(6));
    CHECK(l1_distance(a, b) >= 0.0);
    CHECK(l1_distance(a, b) == l1_distance(b, a));
    CHECK(l1_distance(a, c) <= l1_distance(a, b) + l1_distance(b, c) + 1e-12);
  }
}

TEST_CASE("merge and split maps") {
  const auto p = OrderedPartition::from_weights({0.5, 0.3, 0.2});
  const auto merged = merge_map(p, 0, 1);
  CHECK(merged.size() == 2);
  CHECK(merged[0] == doctest::Approx(0.8));
  CHECK(merged[1] == doctest::Approx(0.2));
  CHECK(merge_map(OrderedPartition::from_weights({0.5, 0.5}), 0, 1) == OrderedPartition{});

  const auto split = split_map(merged, 0, 0.25);
  CHECK(split.size() == 3);
  CHECK(split[0] == doctest::Approx(0.6));
  CHECK(split[1] == doctest::Approx(0.2));
  CHECK(split[2] == doctest::Approx(0.2));
  CHECK(split_map(OrderedPartition{}, 0, 0.5) == OrderedPartition::from_weights({0.5, 0.5}));

  CHECK_THROWS_AS(merge_map(p, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(merge_map(p, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(split_map(p, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(split_map(p, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(split_map(p, 5, 0.5), std::invalid_argument);
}

TEST_CASE("maps keep discrete partitions exact") {
  Rng rng{23};
  for (int s = 0; s < 500; ++s) {
    const std::int64_t n = 2 + static_cast<std::int64_t>(rng.uniform_index(30));
    auto p = sample_ewens(n, rng);
    for (int step = 0; step < 10; ++step) {
      if (p.size() >= 2 && rng.bernoulli(0.5)) {
        p = merge_map(p, 0, p.size() - 1);
      } else if (p.length(0) >= 2) {
        p = split_at(p, 0, 1 + static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(p.length(0) - 1))));
      }
      REQUIRE(p.is_discrete());
      CHECK(p.denominator() == n);
      CHECK(std::accumulate(p.lengths().begin(), p.lengths().end(), std::int64_t{0}) == n);
      check_valid(p);
    }
  }
  const auto half = split_map(OrderedPartition::from_lengths({4}), 0, 0.25);
  CHECK(half.is_discrete());
  CHECK(half.lengths() == CycleType{3, 1});
}

TEST_CASE("random maps preserve the partition invariants") {
  Rng rng{24};
  for (int s = 0; s < 2000; ++s) {
    auto p = random_partition(rng, 1 + rng.uniform_index(8));
    if (p.size() >= 2) {
      check_valid(merge_map(p, rng.uniform_index(p.size() - 1), p.size() - 1));
    }
    check_valid(split_map(p, rng.uniform_index(p.size()), rng.uniform_open()));
  }
}

TEST_CASE("ewens pmf") {
  CHECK(ewens_pmf(CycleTypeCounts{{{1, 3}}}) == make_rational(1, 6));
  CHECK(ewens_pmf(CycleTypeCounts{{{1, 1}, {2, 1}}}) == make_rational(1, 2));
  CHECK(ewens_pmf(CycleTypeCounts{{{1, 1}}}) == 1);
  CHECK_THROWS_AS(CycleTypeCounts(std::map<std::int64_t, std::int64_t>{{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(CycleTypeCounts(std::map<std::int64_t, std::int64_t>{{2, -1}}), std::invalid_argument);
  for (std::int64_t n = 1; n <= 12; ++n) {
    Rational total{0};
    for (const auto& type : integer_partitions(n)) {
      total += ewens_pmf(CycleTypeCounts::from_lengths(type));
    }
    CHECK(total == 1);
  }
  CHECK(integer_partitions(10).size() == 42);
}

TEST_CASE("cycle type encodings agree") {
  for (const auto& type : integer_partitions(9)) {
    const auto a = CycleTypeCounts::from_lengths(type);
    CHECK(a.total() == 9);
    CHECK(a.lengths() == type);
  }
}

TEST_CASE("ewens sampler matches the exact law") {
  Rng rng{25};
  CHECK(sample_ewens(1, rng) == OrderedPartition{});
  for (std::int64_t n : {3, 8}) {
    EmpiricalLaw law;
    for (int s = 0; s < 200000; ++s) {
      law.add(sample_ewens(n, rng).lengths());
    }
    CHECK(tv_distance(law, enumerate_cycle_type_law(static_cast<int>(n))) < 0.01);
  }
}

TEST_CASE("pd1 sampler") {
  Rng rng{26};
  double largest = 0.0;
  double ewens_largest = 0.0;
  double sqrt_sum = 0.0;
  constexpr int kSamples = 20000;
  for (int s = 0; s < kSamples; ++s) {
    const auto p = sample_pd1(rng);
    check_valid(p);
    largest += p[0];
    for (double x : p.parts()) {
      sqrt_sum += std::sqrt(x);
    }
    ewens_largest += sample_ewens(10000, rng)[0];
  }
  CHECK(std::abs(largest - ewens_largest) / kSamples < 0.01);
  CHECK(sqrt_sum / kSamples < 10.0);
  CHECK_THROWS_AS(sample_pd1(rng, 0.0), std::invalid_argument);
}
