#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "stir/split_merge.hpp"
#include "stir/stats.hpp"

using namespace stir;

TEST_CASE("mean-field rate examples") {
  const MeanFieldRates r{CycleType{5, 3, 2}};
  CHECK(r.merge(0, 1) == make_rational(1, 3));
  CHECK(r.split(0, 4) == make_rational(1, 18));
  CHECK(r.split(0, 5) == 0);
  CHECK(r.merge(0, 3) == 0);
  CHECK(r.total() == 1);

  const MeanFieldRates pair{CycleType{2}};
  CHECK(pair.split(0, 1) == 1);
  CHECK(pair.total() == 1);
  CHECK_THROWS_AS(MeanFieldRates{CycleType{1}}, std::invalid_argument);

  Rng rng{61};
  for (int s = 0; s < 300; ++s) {
    const auto n = 2 + static_cast<std::int64_t>(rng.uniform_index(60));
    CHECK(MeanFieldRates::of(sample_ewens(n, rng)).total() == 1);
  }
}

TEST_CASE("discrete step from a single part of two") {
  Rng rng{62};
  for (int s = 0; s < 100; ++s) {
    CHECK(step_discrete(OrderedPartition::from_lengths({2}), rng).lengths() == CycleType{1, 1});
  }
}

TEST_CASE("one-step jump frequencies match the rates") {
  const MeanFieldRates rates{CycleType{3, 2, 1}};
  std::map<std::tuple<int, std::size_t, std::size_t, std::int64_t>, std::int64_t> counts;
  Rng rng{63};
  constexpr int kDraws = 1000000;
  for (int s = 0; s < kDraws; ++s) {
    const Jump j = sample_discrete_jump(rates, rng);
    ++counts[{static_cast<int>(j.kind), j.i, j.j, j.cut}];
  }
  std::int64_t covered = 0;
  auto check = [&](std::tuple<int, std::size_t, std::size_t, std::int64_t> key, const Rational& rate) {
    const double p = to_double(rate);
    const double sigma = std::sqrt(kDraws * p * (1 - p));
    CHECK(std::abs(static_cast<double>(counts[key]) - kDraws * p) < 3.0 * sigma + 1.0);
    covered += counts[key];
  };
  constexpr int kMerge = static_cast<int>(Jump::Kind::merge);
  constexpr int kSplit = static_cast<int>(Jump::Kind::split);
  check({kMerge, 0, 1, 0}, rates.merge(0, 1));
  check({kMerge, 0, 2, 0}, rates.merge(0, 2));
  check({kMerge, 1, 2, 0}, rates.merge(1, 2));
  check({kSplit, 0, 0, 1}, rates.split(0, 1));
  check({kSplit, 0, 0, 2}, rates.split(0, 2));
  check({kSplit, 1, 0, 1}, rates.split(1, 1));
  CHECK(covered == kDraws);
}

TEST_CASE("apply_jump") {
  CHECK(apply_jump(CycleType{3, 2, 1}, Jump::merge(1, 2)) == CycleType{3, 3});
  CHECK(apply_jump(CycleType{3, 2, 1}, Jump::split(0, 2)) == CycleType{2, 2, 1, 1});
}

TEST_CASE("canonical steps") {
  Rng rng{64};
  for (int s = 0; s < 1000; ++s) {
    CHECK(step_canonical(OrderedPartition{}, rng).size() == 2);
  }
  const auto half = OrderedPartition::from_weights({0.5, 0.5});
  constexpr int kDraws = 1000000;
  int merges = 0;
  for (int s = 0; s < kDraws; ++s) {
    const auto next = step_canonical(half, rng);
    CHECK_NOTHROW(next.validate());
    merges += next.size() == 1 ? 1 : 0;
  }
  CHECK(std::abs(merges - kDraws / 2.0) < 3.0 * std::sqrt(kDraws * 0.25));
}

TEST_CASE("run_chain bookkeeping") {
  Rng rng{65};
  const auto p0 = OrderedPartition::from_lengths({4, 2});
  std::vector<double> times;
  const auto stay = run_chain(ChainKind::discrete, p0, 0.0, rng, [&](double t, const OrderedPartition&) {
    times.push_back(t);
  });
  CHECK(stay.events == 0);
  CHECK(stay.final_state == p0);
  CHECK(times == std::vector<double>{0.0});
  CHECK_THROWS_AS(run_chain(ChainKind::discrete, OrderedPartition{}, 1.0, rng), std::invalid_argument);

  constexpr int kRuns = 10000;
  double sum = 0.0;
  for (int r = 0; r < kRuns; ++r) {
    sum += static_cast<double>(run_chain(ChainKind::discrete, p0, 8.0, rng).events);
  }
  CHECK(std::abs(sum / kRuns - 8.0) < 3.0 * std::sqrt(8.0 / kRuns));
}

TEST_CASE("discrete chain is reversible for the Ewens law") {
  for (std::int64_t n = 2; n <= 6; ++n) {
    std::map<std::pair<CycleType, CycleType>, Rational> flow;
    for (const auto& p : integer_partitions(n)) {
      const MeanFieldRates rates{p};
      for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j) {
          flow[{p, apply_jump(p, Jump::merge(i, j))}] += rates.merge(i, j);
        }
        for (std::int64_t k = 1; k < p[i]; ++k) {
          flow[{p, apply_jump(p, Jump::split(i, k))}] += rates.split(i, k);
        }
      }
    }
    for (const auto& [edge, rate] : flow) {
      const auto& [p, q] = edge;
      const auto back = flow.find({q, p});
      REQUIRE(back != flow.end());
      CHECK(ewens_pmf(CycleTypeCounts::from_lengths(p)) * rate ==
            ewens_pmf(CycleTypeCounts::from_lengths(q)) * back->second);
    }
  }
}

TEST_CASE("discrete chain stays at the Ewens law") {
  const auto exact = ewens_law(6);
  std::vector<EmpiricalLaw> laws(4);
  for (int r = 0; r < 40000; ++r) {
    Rng rng{66, static_cast<std::uint64_t>(r)};
    auto p = sample_ewens(6, rng);
    for (auto& law : laws) {
      p = run_chain(ChainKind::discrete, p, 1.25, rng).final_state;
      law.add(p.lengths());
    }
  }
  for (const auto& law : laws) {
    CHECK(tv_distance(law, exact) < 0.02);
  }
}

TEST_CASE("discrete chain approaches the canonical chain as N grows") {
  // l1 distance between the laws of the largest part at t = 2 from the single
  // part: the integral of |F_N - F| over [0, 1], from sorted samples.
  constexpr int kReplicas = 400000;
  constexpr double kT = 2.0;
  auto largest = [&](ChainKind kind, std::int64_t n, std::uint64_t seed) {
    const auto start = n > 0 ? OrderedPartition::from_lengths({n}) : OrderedPartition{};
    auto out = run_replicas(kReplicas, [&](std::int64_t r) {
      Rng rng{seed, static_cast<std::uint64_t>(r)};
      return run_chain(kind, start, kT, rng).final_state[0];
    });
    std::ranges::sort(out);
    return out;
  };
  const auto canonical = largest(ChainKind::canonical, 0, 67);
  std::vector<double> gaps;
  for (std::int64_t n : {50, 200, 500}) {
    const auto discrete = largest(ChainKind::discrete, n, 68);
    double gap = 0.0;
    for (std::size_t r = 0; r < discrete.size(); ++r) {
      gap += std::abs(discrete[r] - canonical[r]) / kReplicas;
    }
    MESSAGE("N = " << n << ": l1 distance of largest-part laws " << gap);
    gaps.push_back(gap);
  }
  CHECK(gaps[0] > gaps[1]);
  CHECK(gaps[1] > gaps[2]);
}
