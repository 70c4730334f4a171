#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "stir/partition.hpp"
#include "stir/rational.hpp"
#include "stir/rng.hpp"
#include "stir/torus.hpp"

namespace stir {

// Histogram over cycle types.
class EmpiricalLaw {
 public:
  void add(const CycleType& type, std::int64_t weight = 1);
  void merge(const EmpiricalLaw& other);

  std::int64_t samples() const { return samples_; }
  const std::map<CycleType, std::int64_t>& counts() const { return counts_; }
  double probability(const CycleType& type) const;

 private:
  std::map<CycleType, std::int64_t> counts_;
  std::int64_t samples_ = 0;
};

// 1/2 sum |empirical - exact| over the union of supports.
double tv_distance(const EmpiricalLaw& empirical, const std::map<CycleType, Rational>& exact);
double tv_distance(const EmpiricalLaw& a, const EmpiricalLaw& b);

// Two-sample Kolmogorov-Smirnov statistic.
double ks_distance(std::vector<double> a, std::vector<double> b);

struct ChiSquareResult {
  double statistic = 0.0;
  std::int64_t dof = 0;
  double p_value = 1.0;
};

// Goodness of fit of category counts to the uniform law.
ChiSquareResult chi_square_uniform(std::span<const std::int64_t> counts);

struct ScalingPoint {
  double n = 0.0;
  double value = 0.0;
  double stderr_ = 0.0;
};

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Least-squares slope of log(value) on log(n), with a 95% parametric
// bootstrap interval drawn from the per-point standard errors.
ScalingFit scaling_regression(std::span<const ScalingPoint> points, Rng& rng, int bootstrap_draws = 2000);

struct MassPoint {
  double t = 0.0;
  double m_hat = 0.0;
  double stderr_ = 0.0;
};

// Mean over replicas of the mass in the k_cutoff largest cycles whose
// fraction is at least eps, for stirring from the identity at unit rate per
// edge. Replica r uses the stream (seed, r).
std::vector<MassPoint> estimate_mass_function(const TorusLattice& lattice, std::vector<double> t_grid,
                                              std::int64_t k_cutoff, double eps, std::int64_t replicas,
                                              std::uint64_t seed);

struct Verdict {
  std::string test;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;

  std::string to_json() const;
};

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};
MeanEstimate mean_and_stderr(std::span<const double> values);

// Runs f(r) for r = 0..count-1 on worker threads and returns the results in
// replica order, so the output does not depend on scheduling.
template <class F>
auto run_replicas(std::int64_t count, F&& f, unsigned threads = 0) {
  using R = decltype(f(std::int64_t{0}));
  std::vector<R> results(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, std::max<std::int64_t>(count, 1)));
  if (threads <= 1) {
    for (std::int64_t r = 0; r < count; ++r) {
      results[static_cast<std::size_t>(r)] = f(r);
    }
    return results;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t r = w; r < count; r += threads) {
        results[static_cast<std::size_t>(r)] = f(r);
      }
    });
  }
  pool.clear();
  return results;
}

}  // namespace stir
