#include "stir/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "stir/coupling.hpp"
#include "stir/cycle_permutation.hpp"
#include "stir/kernel.hpp"
#include "stir/oracle.hpp"
#include "stir/split_merge.hpp"
#include "stir/stats.hpp"
#include "stir/stirring.hpp"

namespace stir {

std::vector<std::pair<Edge, Edge>> oracle_edge_pairs(int n, int overlap) {
  const auto last = static_cast<Vertex>(n - 1);
  std::vector<std::pair<Edge, Edge>> pairs;
  switch (overlap) {
    case 2:
      pairs = {{{0, 1}, {0, 1}}, {{1, last}, {1, last}}};
      break;
    case 1:
      pairs = {{{0, 1}, {1, 2}}, {{0, 1}, {0, 2}}, {{1, last}, {2, last}}};
      break;
    case 0:
      pairs = {{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, last}, {1, 2}}};
      break;
    default:
      throw std::invalid_argument("edge overlap must be 0, 1 or 2");
  }
  return pairs;
}

namespace {

std::string type_string(const CycleType& t) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << (i ? "," : "") << t[i];
  }
  os << ')';
  return os.str();
}

std::string edge_string(const Edge& e) { return "{" + std::to_string(e.first) + "," + std::to_string(e.second) + "}"; }

void record(OracleSummary& s, bool keep, std::string description, Rational closed, Rational oracle) {
  if (closed != oracle) {
    ++s.mismatches;
  }
  if (keep || closed != oracle) {
    s.cases.push_back(OracleCase{std::move(description), std::move(closed), std::move(oracle)});
  }
}

}  // namespace

OracleSummary verify_first_moments(int n, bool keep_cases) {
  OracleSummary summary;
  const auto pairs = n >= 3 ? std::vector<std::pair<Edge, Edge>>{{{0, 1}, {0, 1}}, {{1, 2}, {1, 2}}}
                            : std::vector<std::pair<Edge, Edge>>{{{0, 1}, {0, 1}}};
  for (const auto& [b, c] : pairs) {
    const ConditionalIndicatorMoments oracle{n, b, c};
    for (const CycleType& type : integer_partitions(n)) {
      const std::string where = "N=" + std::to_string(n) + " xi=" + type_string(type) + " b=" + edge_string(b);
      for (std::size_t i = 0; i < type.size(); ++i) {
        for (std::size_t j = i + 1; j < type.size(); ++j) {
          record(summary, keep_cases, "E[phi_" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "] " + where,
                 expected_phi(type, i, j), oracle.phi(type, i, j));
        }
        for (std::int64_t l = 1; l <= type[i]; ++l) {
          record(summary, keep_cases, "E[psi_" + std::to_string(i + 1) + "," + std::to_string(l) + "] " + where,
                 expected_psi(type, i, l), oracle.psi(type, i, l));
        }
      }
    }
  }
  return summary;
}

OracleSummary verify_second_moments(int n, bool keep_cases) {
  OracleSummary summary;
  for (int overlap = 2; overlap >= 0; --overlap) {
    if (n < 4 - overlap) {
      continue;
    }
    std::set<UnionJackClass> seen;
    for (const auto& [b, c] : oracle_edge_pairs(n, overlap)) {
      const ConditionalIndicatorMoments oracle{n, b, c};
      for (const CycleType& type : integer_partitions(n)) {
        const std::string where = "N=" + std::to_string(n) + " |b^c|=" + std::to_string(overlap) +
                                  " xi=" + type_string(type) + " b=" + edge_string(b) + " c=" + edge_string(c);
        for (std::size_t i = 0; i < type.size(); ++i) {
          for (std::size_t j = i + 1; j < type.size(); ++j) {
            record(summary, keep_cases,
                   "E[phi phi]_" + std::to_string(i + 1) + "," + std::to_string(j + 1) + " " + where,
                   expected_phi_phi(type, i, j, overlap), oracle.phi_phi(type, i, j));
          }
          const std::int64_t m = type[i];
          for (std::int64_t l = 1; l < m; ++l) {
            for (std::int64_t l2 = 1; l2 < m; ++l2) {
              const UnionJackClass cls = classify_union_jack(m, l, l2);
              const Rational closed = expected_psi_psi(type, i, l, l2, overlap);
              if (closed != 0) {
                seen.insert(cls);
              }
              record(summary, keep_cases,
                     "E[psi psi]_" + std::to_string(i + 1) + " (l,l')=(" + std::to_string(l) + "," +
                         std::to_string(l2) + ") " + std::string{to_string(cls)} + " " + where,
                     closed, oracle.psi_psi(type, i, l, l2));
            }
          }
        }
      }
    }
    summary.realized_classes[static_cast<std::size_t>(overlap)].assign(seen.begin(), seen.end());
  }
  return summary;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.skipped ? "[SKIP] " : r.pass ? "[PASS] " : "[FAIL] ") << std::setw(2) << r.id << ' ' << r.name << ": "
     << r.detail << " (" << std::fixed << std::setprecision(1) << r.seconds << " s)";
  return os.str();
}

namespace {

// Independent seed per criterion; replicas use the stream index.
std::uint64_t criterion_seed(std::uint64_t seed, int id) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(id + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome ewens_exactness() {
  std::int64_t types = 0;
  for (int n = 2; n <= 8; ++n) {
    const auto law = enumerate_cycle_type_law(n);
    if (law.size() != integer_partitions(n).size()) {
      return {false, "enumeration missed cycle types at N=" + std::to_string(n)};
    }
    for (const auto& [type, p] : law) {
      ++types;
      if (ewens_pmf(CycleTypeCounts::from_lengths(type)) != p) {
        return {false, "pmf differs at N=" + std::to_string(n) + " type " + type_string(type)};
      }
    }
  }
  return {true, std::to_string(types) + " cycle types, N=2..8, all equal"};
}

Outcome covariance_exactness() {
  std::int64_t cases = 0;
  std::int64_t mismatches = 0;
  std::string first;
  std::vector<std::set<UnionJackClass>> classes(3);
  for (int n = 4; n <= 8; ++n) {
    const OracleSummary s = verify_second_moments(n, false);
    for (std::size_t o = 0; o < 3; ++o) {
      classes[o].insert(s.realized_classes[o].begin(), s.realized_classes[o].end());
    }
    mismatches += s.mismatches;
    if (first.empty() && !s.cases.empty()) {
      first = s.cases.front().description;
    }
    for (int overlap = 0; overlap <= 2; ++overlap) {
      const auto pairs = oracle_edge_pairs(n, overlap).size();
      for (const CycleType& type : integer_partitions(n)) {
        std::int64_t per = 0;
        for (std::size_t i = 0; i < type.size(); ++i) {
          per += static_cast<std::int64_t>(type.size() - i - 1) + (type[i] - 1) * (type[i] - 1);
        }
        cases += per * static_cast<std::int64_t>(pairs);
      }
    }
  }
  std::string realized;
  for (int o = 2; o >= 0; --o) {
    realized += " |b^c|=" + std::to_string(o) + ":";
    for (UnionJackClass c : classes[static_cast<std::size_t>(o)]) {
      realized += to_string(c);
    }
  }
  if (mismatches > 0) {
    return {false, std::to_string(mismatches) + " of " + std::to_string(cases) + " differ; first: " + first};
  }
  return {true, std::to_string(cases) + " cases equal, N=4..8; classes" + realized};
}

Outcome conditional_expectations() {
  std::int64_t mismatches = 0;
  std::string first;
  for (int n = 2; n <= 8; ++n) {
    const OracleSummary s = verify_first_moments(n, false);
    mismatches += s.mismatches;
    if (first.empty() && !s.cases.empty()) {
      first = s.cases.front().description;
    }
  }
  if (mismatches > 0) {
    return {false, std::to_string(mismatches) + " mismatches; first: " + first};
  }
  return {true, "E[phi|xi], E[psi|xi] equal enumeration for every type, N=2..8"};
}

Outcome rate_identities(std::uint64_t seed) {
  const std::vector<TorusLattice> lattices{TorusLattice{2, 3}, TorusLattice{1, 7}, TorusLattice{3, 3},
                                           TorusLattice{2, 4}, TorusLattice{1, 2}};
  Rng rng{seed, 0};
  constexpr int kStates = 10000;
  int stirring_bad = 0;
  int mean_field_bad = 0;
  for (int s = 0; s < kStates; ++s) {
    const TorusLattice& lattice = lattices[rng.uniform_index(lattices.size())];
    const auto perm = CyclePermutation::uniform(lattice.vertex_count(), rng);
    if (instantaneous_rates(perm, lattice).total() != 1) {
      ++stirring_bad;
    }
    const auto n = 2 + static_cast<std::int64_t>(rng.uniform_index(199));
    if (MeanFieldRates::of(sample_ewens(n, rng)).total() != 1) {
      ++mean_field_bad;
    }
  }
  return {stirring_bad == 0 && mean_field_bad == 0,
          "sum X + sum Y != 1 on " + std::to_string(stirring_bad) + " and sum U + sum V != 1 on " +
              std::to_string(mean_field_bad) + " of " + std::to_string(kStates) + " states each"};
}

Outcome kernel_laws(std::uint64_t seed) {
  for (std::int64_t M = 1; M <= 20; ++M) {
    const KernelLawReport r = check_kernel_laws(SmoothingKernel{M}, 200);
    if (!r.ok()) {
      return {false, r.first_failure};
    }
  }
  Rng rng{seed, 0};
  int bad = 0;
  constexpr int kRows = 2000;
  for (int s = 0; s < kRows; ++s) {
    const SmoothingKernel kernel{1 + static_cast<std::int64_t>(rng.uniform_index(20))};
    const auto m = 2 + static_cast<std::int64_t>(rng.uniform_index(199));
    RateRow y{1 + static_cast<std::int64_t>(rng.uniform_index(1000)), {}};
    for (std::int64_t k = 1; k < m; ++k) {
      y.numerators.push_back(rng.bernoulli(0.3) ? static_cast<std::int64_t>(rng.uniform_index(50)) : 0);
    }
    if (smooth_row(y, kernel).total() != y.total()) {
      ++bad;
    }
  }
  return {bad == 0, "symmetric, row-stochastic, banded for m<=200, M=1..20; smoothing changed the split mass on " +
                        std::to_string(bad) + " of " + std::to_string(kRows) + " random rows"};
}

OrderedPartition random_partition(Rng& rng, std::size_t max_parts) {
  const std::size_t parts = 1 + rng.uniform_index(max_parts);
  std::vector<double> w(parts);
  double sum = 0.0;
  for (double& x : w) {
    x = rng.exponential();
    sum += x;
  }
  for (double& x : w) {
    x /= sum;
  }
  return OrderedPartition::from_weights(std::move(w));
}

Outcome sorted_metric(std::uint64_t seed) {
  Rng rng{seed, 0};
  constexpr int kInstances = 1000;
  double worst = 0.0;
  for (int s = 0; s < kInstances; ++s) {
    const OrderedPartition p = random_partition(rng, 6);
    const OrderedPartition q = random_partition(rng, 6);
    std::vector<std::size_t> pi(6);
    std::iota(pi.begin(), pi.end(), std::size_t{0});
    double best = 1e300;
    do {
      double sum = 0.0;
      for (std::size_t i = 0; i < 6; ++i) {
        sum += std::abs(p[i] - q[pi[i]]);
      }
      best = std::min(best, sum);
    } while (std::next_permutation(pi.begin(), pi.end()));
    worst = std::max(worst, std::abs(best - l1_distance(p, q)));
  }
  return {worst <= 1e-12, "max |sorted - min over bijections| = " + fmt(worst) + " over " +
                              std::to_string(kInstances) + " instances"};
}

Outcome distance_jump_bounds(std::uint64_t seed) {
  Rng rng{seed, 0};
  constexpr int kInstances = 10000;
  constexpr double kSlack = 1e-12;
  std::array<int, 4> violations{};
  for (int s = 0; s < kInstances; ++s) {
    const OrderedPartition x = random_partition(rng, 6);
    const OrderedPartition y = random_partition(rng, 6);
    const double d = l1_distance(x, y);
    const double u = rng.uniform_open();
    const double v = rng.uniform_open();
    const std::size_t common = std::min(x.size(), y.size());
    if (common >= 2) {
      std::size_t i = rng.uniform_index(common);
      std::size_t j = rng.uniform_index(common - 1);
      if (j >= i) {
        ++j;
      }
      if (i > j) {
        std::swap(i, j);
      }
      if (l1_distance(merge_map(x, i, j), merge_map(y, i, j)) > d + kSlack) {
        ++violations[0];
      }
    }
    {
      const std::size_t i = rng.uniform_index(common);
      if (l1_distance(split_map(x, i, u), split_map(y, i, v)) > d + 2 * std::abs(u * x[i] - v * y[i]) + kSlack) {
        ++violations[1];
      }
    }
    if (x.size() >= 2) {
      std::size_t i = rng.uniform_index(x.size());
      std::size_t j = rng.uniform_index(x.size() - 1);
      if (j >= i) {
        ++j;
      }
      if (i > j) {
        std::swap(i, j);
      }
      if (l1_distance(merge_map(x, i, j), y) > d + x[j] + y[j] + kSlack) {
        ++violations[2];
      }
    }
    {
      const std::size_t i = rng.uniform_index(x.size());
      if (l1_distance(split_map(x, i, u), y) > d + (x[i] + y[i]) / 2 + kSlack) {
        ++violations[3];
      }
    }
  }
  const int total = violations[0] + violations[1] + violations[2] + violations[3];
  return {total == 0, "violations merge/split/merge-mis/split-mis = " + std::to_string(violations[0]) + "/" +
                          std::to_string(violations[1]) + "/" + std::to_string(violations[2]) + "/" +
                          std::to_string(violations[3]) + " over " + std::to_string(kInstances) + " instances"};
}

Outcome stirring_stationarity(std::uint64_t seed) {
  const TorusLattice lattice{1, 6};
  constexpr std::int64_t kReplicas = 100000;
  const auto finals = run_replicas(kReplicas, [&](std::int64_t r) {
    Rng rng{seed, static_cast<std::uint64_t>(r)};
    CyclePermutation perm = CyclePermutation::uniform(lattice.vertex_count(), rng);
    run_stirring(lattice, perm, 50.0, rng);
    return perm.lengths();
  });
  EmpiricalLaw law;
  for (const auto& t : finals) {
    law.add(t);
  }
  const double tv = tv_distance(law, ewens_law(6));
  return {tv <= 0.02, "TV(law at T=50, pi^6) = " + fmt(tv) + " <= 0.02 over 1e5 replicas"};
}

// pi(p) rate(p -> q) = pi(q) rate(q -> p) over all types of n, with rates
// summed over the jumps that lead to the same type.
bool detailed_balance(std::int64_t n, std::string& failure) {
  const auto law = ewens_law(n);
  std::map<std::pair<CycleType, CycleType>, Rational> flow;
  for (const auto& [p, pi] : law) {
    const MeanFieldRates rates{p};
    auto add = [&](const Jump& jump, const Rational& rate) {
      flow[{p, apply_jump(p, jump)}] += pi * rate;
    };
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = i + 1; j < p.size(); ++j) {
        add(Jump::merge(i, j), rates.merge(i, j));
      }
      for (std::int64_t k = 1; k < p[i]; ++k) {
        add(Jump::split(i, k), rates.split(i, k));
      }
    }
  }
  for (const auto& [edge, f] : flow) {
    const auto back = flow.find({edge.second, edge.first});
    if (back == flow.end() || back->second != f) {
      failure = "N=" + std::to_string(n) + " " + type_string(edge.first) + " -> " + type_string(edge.second);
      return false;
    }
  }
  return true;
}

Outcome split_merge_stationarity(std::uint64_t seed, bool quick) {
  std::string failure;
  for (std::int64_t n = 2; n <= 6; ++n) {
    if (!detailed_balance(n, failure)) {
      return {false, "detailed balance fails at " + failure};
    }
  }
  if (quick) {
    return {true, "detailed balance exact for N=2..6 (simulation skipped in quick mode)"};
  }
  constexpr std::int64_t kReplicas = 100000;
  const auto snapshots = run_replicas(kReplicas, [&](std::int64_t r) {
    Rng rng{seed, static_cast<std::uint64_t>(r)};
    std::array<CycleType, 2> at{};
    OrderedPartition p = sample_ewens(6, rng);
    const ChainRun first = run_chain(ChainKind::discrete, p, 1.0, rng);
    at[0] = first.final_state.lengths();
    const ChainRun second = run_chain(ChainKind::discrete, first.final_state, 4.0, rng);
    at[1] = second.final_state.lengths();
    return at;
  });
  std::array<EmpiricalLaw, 2> laws;
  for (const auto& s : snapshots) {
    laws[0].add(s[0]);
    laws[1].add(s[1]);
  }
  const auto exact = ewens_law(6);
  const double tv1 = tv_distance(laws[0], exact);
  const double tv5 = tv_distance(laws[1], exact);
  return {tv1 <= 0.02 && tv5 <= 0.02, "detailed balance exact for N=2..6; TV to pi^6 at t=1: " + fmt(tv1) +
                                          ", t=5: " + fmt(tv5) + " (<= 0.02, 1e5 replicas)"};
}

Outcome coupling_marginals(std::uint64_t seed) {
  const TorusLattice lattice{1, 6};
  constexpr std::int64_t kReplicas = 100000;
  constexpr double kT = 3.0;
  const std::uint64_t direct_seed = criterion_seed(seed, 100);
  struct Sample {
    CycleType xi, zeta, stirring, chain;
  };
  const auto samples = run_replicas(kReplicas, [&](std::int64_t r) {
    Sample s;
    Rng rng{seed, static_cast<std::uint64_t>(r)};
    const CouplingReport report = run_coupling(lattice, kT, std::nullopt, rng);
    s.xi = report.final_xi;
    s.zeta = report.final_zeta;
    Rng direct{direct_seed, static_cast<std::uint64_t>(r)};
    CyclePermutation perm = CyclePermutation::uniform(lattice.vertex_count(), direct);
    run_stirring(lattice, perm, kT, direct);
    s.stirring = perm.lengths();
    s.chain = run_chain(ChainKind::discrete, sample_ewens(6, direct), kT, direct).final_state.lengths();
    return s;
  });
  EmpiricalLaw xi;
  EmpiricalLaw zeta;
  EmpiricalLaw stirring;
  EmpiricalLaw chain;
  for (const Sample& s : samples) {
    xi.add(s.xi);
    zeta.add(s.zeta);
    stirring.add(s.stirring);
    chain.add(s.chain);
  }
  const double tv_zeta = tv_distance(zeta, chain);
  const double tv_eta = tv_distance(xi, stirring);
  return {tv_zeta <= 0.02 && tv_eta <= 0.02, "TV(zeta-marginal, split-merge chain) = " + fmt(tv_zeta) +
                                                 ", TV(eta-marginal, stirring) = " + fmt(tv_eta) +
                                                 " (<= 0.02, N=6, t=3, 1e5 replicas)"};
}

Outcome pathwise_bound(std::uint64_t seed) {
  const TorusLattice lattice{2, 8};
  constexpr std::int64_t kReplicas = 10000;
  constexpr double kT = 4.0;
  const auto violations = run_replicas(kReplicas, [&](std::int64_t r) {
    Rng rng{seed, static_cast<std::uint64_t>(r)};
    const CouplingReport report = run_coupling(lattice, kT, std::nullopt, rng);
    return std::array<std::int64_t, 2>{report.bound_violations, report.stirring_events};
  });
  std::int64_t bad = 0;
  std::int64_t events = 0;
  for (const auto& v : violations) {
    bad += v[0];
    events += v[1];
  }
  return {bad == 0, std::to_string(bad) + " violations of N d <= 2 M nu over 1e4 runs (d=2, n=8, T=4, " +
                        std::to_string(events) + " stirring events)"};
}

struct TrendPoint {
  double median = 0.0;
  double mismatch = 0.0;
};

TrendPoint coupling_trend_point(int side, std::int64_t replicas, std::uint64_t seed) {
  const TorusLattice lattice{3, side};
  const double horizon = default_horizon(static_cast<std::int64_t>(lattice.vertex_count()));
  const auto reports = run_replicas(replicas, [&](std::int64_t r) {
    Rng rng{seed + static_cast<std::uint64_t>(side), static_cast<std::uint64_t>(r)};
    const CouplingReport report = run_coupling(lattice, horizon, std::nullopt, rng);
    return std::pair<double, bool>{report.max_distance, report.tau.has_value()};
  });
  std::vector<double> maxima;
  double hits = 0.0;
  for (const auto& [m, tau] : reports) {
    maxima.push_back(m);
    hits += tau ? 1.0 : 0.0;
  }
  std::sort(maxima.begin(), maxima.end());
  return {0.5 * (maxima[(maxima.size() - 1) / 2] + maxima[maxima.size() / 2]),
          hits / static_cast<double>(replicas)};
}

Outcome coupling_trend(std::uint64_t seed) {
  constexpr std::int64_t kReplicas = 200;
  // Not part of the verdict: a high-replica run of the same statistics, printed
  // so that a red result can be told apart from a wrong trend.
  constexpr std::int64_t kReferenceReplicas = 10000;
  std::vector<double> medians;
  std::vector<double> mismatch;
  std::string detail;
  std::string reference;
  for (int side : {4, 6, 8}) {
    const TrendPoint p = coupling_trend_point(side, kReplicas, seed);
    medians.push_back(p.median);
    mismatch.push_back(p.mismatch);
    detail += " n=" + std::to_string(side) + ": median " + fmt(p.median) + ", P(tau<T) " + fmt(p.mismatch, 3) + ";";
    const TrendPoint ref = coupling_trend_point(side, kReferenceReplicas, criterion_seed(seed, side));
    reference += " n=" + std::to_string(side) + ": " + fmt(ref.median) + ", " + fmt(ref.mismatch, 3) + ";";
  }
  const bool pass =
      std::is_sorted(medians.rbegin(), medians.rend()) && std::is_sorted(mismatch.rbegin(), mismatch.rend());
  return {pass, "d=3, M=ceil(sqrt N), T=N^(1/8), 200 replicas:" + detail + " reference at 1e4 replicas:" + reference};
}

Outcome fluctuation_scaling(std::uint64_t seed) {
  constexpr std::int64_t kSamples = 4000;
  std::vector<ScalingPoint> points;
  std::string detail;
  for (int n : {64, 256, 1024}) {
    const TorusLattice lattice{1, n};
    const auto values = run_replicas(kSamples, [&](std::int64_t r) {
      Rng rng{seed + static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r)};
      const auto perm = CyclePermutation::uniform(lattice.vertex_count(), rng);
      const InstantaneousRates rates = instantaneous_rates(perm, lattice);
      double sum = 0.0;
      const auto nn = static_cast<double>(n);
      for (std::size_t i = 0; i < rates.lengths.size(); ++i) {
        for (std::size_t j = i + 1; j < rates.lengths.size(); ++j) {
          const double expected =
              2.0 * static_cast<double>(rates.lengths[i]) * static_cast<double>(rates.lengths[j]) / (nn * (nn - 1.0));
          sum += std::abs(rates.x_value(i, j) - expected);
        }
      }
      return sum;
    });
    const MeanEstimate e = mean_and_stderr(values);
    points.push_back(ScalingPoint{static_cast<double>(n), e.mean, e.stderr_});
    detail += " N=" + std::to_string(n) + ": " + fmt(e.mean) + ";";
  }
  Rng rng{seed, 1};
  const ScalingFit fit = scaling_regression(points, rng);
  return {fit.slope >= -0.65 && fit.slope <= -0.35,
          "slope " + fmt(fit.slope) + " (95% CI " + fmt(fit.ci_low) + ".." + fmt(fit.ci_high) +
              ") in [-0.65, -0.35];" + detail};
}

Outcome weighted_dynamics(std::uint64_t seed, bool quick) {
  // theta = 1 against plain stirring, event for event.
  const TorusLattice ring{1, 7};
  int differing = 0;
  constexpr int kRuns = 200;
  for (int r = 0; r < kRuns; ++r) {
    using Trace = std::vector<std::pair<double, std::vector<Vertex>>>;
    Trace plain;
    Trace weighted;
    Rng a{seed, static_cast<std::uint64_t>(r)};
    Rng b{seed, static_cast<std::uint64_t>(r)};
    CyclePermutation pa = CyclePermutation::uniform(ring.vertex_count(), a);
    CyclePermutation pb = CyclePermutation::uniform(ring.vertex_count(), b);
    run_stirring(ring, pa, 20.0, a,
                 [&](double t, const TranspositionEffect&, const CyclePermutation& p) { plain.emplace_back(t, p.successors()); });
    run_weighted_stirring(ring, 1.0, pb, 20.0, b, [&](double t, const TranspositionEffect&, const CyclePermutation& p) {
      weighted.emplace_back(t, p.successors());
    });
    if (plain != weighted) {
      ++differing;
    }
  }
  std::string detail = "theta=1 traces differ in " + std::to_string(differing) + " of " + std::to_string(kRuns) + " runs";
  if (quick) {
    return {differing == 0, detail + " (theta=2 law skipped in quick mode)"};
  }
  const TorusLattice lattice{1, 5};
  constexpr double kTheta = 2.0;
  constexpr std::int64_t kReplicas = 100000;
  const auto finals = run_replicas(kReplicas, [&](std::int64_t r) {
    Rng rng{criterion_seed(seed, 1), static_cast<std::uint64_t>(r)};
    CyclePermutation perm = CyclePermutation::uniform(lattice.vertex_count(), rng);
    run_weighted_stirring(lattice, kTheta, perm, 40.0, rng);
    return perm.lengths();
  });
  EmpiricalLaw law;
  for (const auto& t : finals) {
    law.add(t);
  }
  std::map<CycleType, Rational> target;
  Rational z{0};
  for (const auto& [type, p] : ewens_law(5)) {
    Rational w = p;
    for (std::size_t c = 0; c < type.size(); ++c) {
      w *= static_cast<long>(kTheta);
    }
    target[type] = w;
    z += w;
  }
  for (auto& [type, w] : target) {
    w /= z;
  }
  const double tv = tv_distance(law, target);
  return {differing == 0 && tv <= 0.02, detail + "; theta=2, N=5 TV = " + fmt(tv) + " <= 0.02 (1e5 replicas, T=40)"};
}

Outcome pd1_consistency(std::uint64_t seed) {
  constexpr std::int64_t kSamples = 100000;
  const auto pairs = run_replicas(kSamples, [&](std::int64_t r) {
    Rng rng{seed, static_cast<std::uint64_t>(r)};
    const double pd = sample_pd1(rng)[0];
    return std::pair<double, double>{pd, sample_ewens(10000, rng)[0]};
  });
  std::vector<double> a;
  std::vector<double> b;
  for (const auto& [x, y] : pairs) {
    a.push_back(x);
    b.push_back(y);
  }
  const double ks = ks_distance(a, b);
  return {ks < 0.02, "KS(xi_1 of PD(1), xi_1 of Ewens N=1e4) = " + fmt(ks) + " < 0.02 (1e5 samples each)"};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  const std::uint64_t seed = options.seed;
  const bool quick = options.quick;
  struct Entry {
    int id;
    const char* name;
    bool exact;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries{
      {1, "Ewens exactness", true, [] { return ewens_exactness(); }},
      {2, "Covariance formulas vs enumeration", true, [] { return covariance_exactness(); }},
      {3, "Conditional expectations", true, [] { return conditional_expectations(); }},
      {4, "Rate identities", true, [&] { return rate_identities(criterion_seed(seed, 4)); }},
      {5, "Kernel laws", true, [&] { return kernel_laws(criterion_seed(seed, 5)); }},
      {6, "Sorted l1 metric", true, [&] { return sorted_metric(criterion_seed(seed, 6)); }},
      {7, "Distance jump bounds", true, [&] { return distance_jump_bounds(criterion_seed(seed, 7)); }},
      {8, "Stationarity of stirring", false, [&] { return stirring_stationarity(criterion_seed(seed, 8)); }},
      {9, "Stationarity and reversibility of split-merge", true,
       [&] { return split_merge_stationarity(criterion_seed(seed, 9), quick); }},
      {10, "Coupling marginal fidelity", false, [&] { return coupling_marginals(criterion_seed(seed, 10)); }},
      {11, "Pathwise distance bound", false, [&] { return pathwise_bound(criterion_seed(seed, 11)); }},
      {12, "Coupling trend in N", false, [&] { return coupling_trend(criterion_seed(seed, 12)); }},
      {13, "Fluctuation scaling", false, [&] { return fluctuation_scaling(criterion_seed(seed, 13)); }},
      {14, "Weighted dynamics", true, [&] { return weighted_dynamics(criterion_seed(seed, 14), quick); }},
      {15, "PD(1) consistency", false, [&] { return pd1_consistency(criterion_seed(seed, 15)); }},
  };
  std::vector<CriterionResult> results;
  for (const Entry& e : entries) {
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    if (quick && !e.exact) {
      r.skipped = true;
      r.pass = true;
      r.detail = "not in the quick subset";
    } else {
      const auto start = std::chrono::steady_clock::now();
      try {
        const Outcome o = e.run();
        r.pass = o.pass;
        r.detail = o.detail;
      } catch (const std::exception& ex) {
        r.pass = false;
        r.detail = std::string{"exception: "} + ex.what();
      }
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    if (options.log) {
      *options.log << format_result(r) << std::endl;
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace stir
