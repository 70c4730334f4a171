#include "stir/stats.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "json.hpp"
#include "stir/cycle_permutation.hpp"

namespace stir {

void EmpiricalLaw::add(const CycleType& type, std::int64_t weight) {
  if (weight < 0) {
    throw std::invalid_argument("empirical weights must be nonnegative");
  }
  counts_[type] += weight;
  samples_ += weight;
}

void EmpiricalLaw::merge(const EmpiricalLaw& other) {
  for (const auto& [type, count] : other.counts_) {
    add(type, count);
  }
}

double EmpiricalLaw::probability(const CycleType& type) const {
  if (samples_ == 0) {
    return 0.0;
  }
  const auto it = counts_.find(type);
  return it == counts_.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(samples_);
}

double tv_distance(const EmpiricalLaw& empirical, const std::map<CycleType, Rational>& exact) {
  double sum = 0.0;
  for (const auto& [type, p] : exact) {
    sum += std::abs(empirical.probability(type) - to_double(p));
  }
  for (const auto& [type, count] : empirical.counts()) {
    if (!exact.contains(type)) {
      sum += empirical.probability(type);
    }
  }
  return 0.5 * sum;
}

double tv_distance(const EmpiricalLaw& a, const EmpiricalLaw& b) {
  std::set<CycleType> support;
  for (const auto& [type, count] : a.counts()) {
    support.insert(type);
  }
  for (const auto& [type, count] : b.counts()) {
    support.insert(type);
  }
  double sum = 0.0;
  for (const CycleType& type : support) {
    sum += std::abs(a.probability(type) - b.probability(type));
  }
  return 0.5 * sum;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("KS distance needs nonempty samples");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) {
      ++i;
    }
    while (j < b.size() && b[j] == x) {
      ++j;
    }
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

ChiSquareResult chi_square_uniform(std::span<const std::int64_t> counts) {
  if (counts.size() < 2) {
    throw std::invalid_argument("chi-square test needs at least two categories");
  }
  double total = 0.0;
  for (std::int64_t c : counts) {
    total += static_cast<double>(c);
  }
  if (total <= 0.0) {
    throw std::invalid_argument("chi-square test needs observations");
  }
  const double expected = total / static_cast<double>(counts.size());
  ChiSquareResult result;
  for (std::int64_t c : counts) {
    const double diff = static_cast<double>(c) - expected;
    result.statistic += diff * diff / expected;
  }
  result.dof = static_cast<std::int64_t>(counts.size()) - 1;
  const boost::math::chi_squared dist(static_cast<double>(result.dof));
  result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
  return result;
}

namespace {

std::pair<double, double> least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace

ScalingFit scaling_regression(std::span<const ScalingPoint> points, Rng& rng, int bootstrap_draws) {
  if (points.size() < 3) {
    throw std::invalid_argument("scaling regression needs at least three points");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const ScalingPoint& p : points) {
    if (!(p.n > 0.0) || !(p.value > 0.0) || p.stderr_ < 0.0) {
      throw std::invalid_argument("scaling regression needs positive N and statistics");
    }
    x.push_back(std::log(p.n));
    y.push_back(std::log(p.value));
  }
  if (std::all_of(x.begin(), x.end(), [&x](double v) { return v == x.front(); })) {
    throw std::invalid_argument("scaling regression needs at least two distinct N");
  }
  ScalingFit fit;
  std::tie(fit.slope, fit.intercept) = least_squares(x, y);
  fit.ci_low = fit.ci_high = fit.slope;
  if (bootstrap_draws <= 0) {
    return fit;
  }
  std::vector<double> slopes;
  std::normal_distribution<double> normal;
  std::vector<double> yb(y.size());
  for (int draw = 0; draw < bootstrap_draws; ++draw) {
    bool ok = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double v = points[i].value + points[i].stderr_ * normal(rng);
      if (v <= 0.0) {
        ok = false;
        break;
      }
      yb[i] = std::log(v);
    }
    if (ok) {
      slopes.push_back(least_squares(x, yb).first);
    }
  }
  if (!slopes.empty()) {
    std::sort(slopes.begin(), slopes.end());
    const auto at = [&slopes](double q) {
      return slopes[static_cast<std::size_t>(q * static_cast<double>(slopes.size() - 1))];
    };
    fit.ci_low = at(0.025);
    fit.ci_high = at(0.975);
  }
  return fit;
}

MeanEstimate mean_and_stderr(std::span<const double> values) {
  MeanEstimate e;
  if (values.empty()) {
    return e;
  }
  const auto n = static_cast<double>(values.size());
  for (double v : values) {
    e.mean += v;
  }
  e.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) {
      ss += (v - e.mean) * (v - e.mean);
    }
    e.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

std::vector<MassPoint> estimate_mass_function(const TorusLattice& lattice, std::vector<double> t_grid,
                                              std::int64_t k_cutoff, double eps, std::int64_t replicas,
                                              std::uint64_t seed) {
  if (replicas < 1 || k_cutoff < 1 || !(eps > 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("mass function needs replicas >= 1, k >= 1 and 0 < eps <= 1");
  }
  std::sort(t_grid.begin(), t_grid.end());
  if (!t_grid.empty() && t_grid.front() < 0.0) {
    throw std::invalid_argument("time grid must be nonnegative");
  }
  const auto n = static_cast<double>(lattice.vertex_count());
  const auto edge_rate = static_cast<double>(lattice.edge_count());
  auto macroscopic = [&](const CyclePermutation& perm) {
    const CycleType lengths = perm.lengths();
    double mass = 0.0;
    for (std::size_t i = 0; i < lengths.size() && static_cast<std::int64_t>(i) < k_cutoff; ++i) {
      const double p = static_cast<double>(lengths[i]) / n;
      if (p < eps) {
        break;
      }
      mass += p;
    }
    return mass;
  };
  const auto curves = run_replicas(replicas, [&](std::int64_t r) {
    Rng rng{seed, static_cast<std::uint64_t>(r)};
    CyclePermutation perm{lattice.vertex_count()};
    std::vector<double> values;
    values.reserve(t_grid.size());
    double t = rng.exponential(edge_rate);
    for (double target : t_grid) {
      while (t <= target) {
        perm.apply_transposition(lattice.sample_edge(rng));
        t += rng.exponential(edge_rate);
      }
      values.push_back(macroscopic(perm));
    }
    return values;
  });
  std::vector<MassPoint> out;
  for (std::size_t g = 0; g < t_grid.size(); ++g) {
    std::vector<double> column;
    column.reserve(curves.size());
    for (const auto& curve : curves) {
      column.push_back(curve[g]);
    }
    const MeanEstimate e = mean_and_stderr(column);
    out.push_back(MassPoint{t_grid[g], e.mean, e.stderr_});
  }
  return out;
}

std::string Verdict::to_json() const {
  nlohmann::json j;
  j["test"] = test;
  j["statistic"] = statistic;
  j["threshold"] = threshold;
  j["pass"] = pass;
  return j.dump();
}

}  // namespace stir
