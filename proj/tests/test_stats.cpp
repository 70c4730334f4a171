#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "stir/stats.hpp"

using namespace stir;

TEST_CASE("total variation") {
  const std::map<CycleType, Rational> exact{{CycleType{2}, make_rational(1, 2)}, {CycleType{1, 1}, make_rational(1, 2)}};
  EmpiricalLaw matching;
  matching.add(CycleType{2}, 3);
  matching.add(CycleType{1, 1}, 3);
  CHECK(tv_distance(matching, exact) == 0.0);
  EmpiricalLaw point;
  point.add(CycleType{2});
  CHECK(tv_distance(point, exact) == doctest::Approx(0.5));
  CHECK(tv_distance(point, matching) == doctest::Approx(0.5));
  CHECK(tv_distance(matching, matching) == 0.0);

  Rng rng{81};
  EmpiricalLaw a;
  EmpiricalLaw b;
  for (int s = 0; s < 1000000; ++s) {
    a.add(sample_ewens(6, rng).lengths());
    b.add(sample_ewens(6, rng).lengths());
  }
  CHECK(tv_distance(a, b) < 0.01);
  const double tv = tv_distance(a, ewens_law(6));
  CHECK(tv >= 0.0);
  CHECK(tv < 0.01);
}

TEST_CASE("empirical law bookkeeping") {
  EmpiricalLaw a;
  a.add(CycleType{3}, 2);
  EmpiricalLaw b;
  b.add(CycleType{2, 1});
  b.add(CycleType{3});
  a.merge(b);
  CHECK(a.samples() == 4);
  CHECK(a.probability(CycleType{3}) == doctest::Approx(0.75));
  CHECK(a.probability(CycleType{1, 1, 1}) == 0.0);
  std::int64_t mass = 0;
  for (const auto& [type, c] : a.counts()) {
    CHECK(c >= 0);
    mass += c;
  }
  CHECK(mass == a.samples());
}

TEST_CASE("kolmogorov-smirnov") {
  CHECK(ks_distance({0.1, 0.5, 0.7}, {0.7, 0.1, 0.5}) == 0.0);
  CHECK(ks_distance({0.0}, {1.0}) == 1.0);
  CHECK_THROWS_AS(ks_distance({}, {1.0}), std::invalid_argument);
  Rng rng{82};
  std::vector<double> a;
  std::vector<double> b;
  for (int s = 0; s < 100000; ++s) {
    a.push_back(sample_pd1(rng)[0]);
    b.push_back(sample_pd1(rng)[0]);
  }
  CHECK(ks_distance(a, b) < 0.01);
}

TEST_CASE("chi-square against uniform") {
  const std::vector<std::int64_t> flat{100, 100, 100, 100};
  const auto fit = chi_square_uniform(flat);
  CHECK(fit.statistic == 0.0);
  CHECK(fit.dof == 3);
  CHECK(fit.p_value == doctest::Approx(1.0));
  const std::vector<std::int64_t> skewed{400, 0, 0, 0};
  CHECK(chi_square_uniform(skewed).p_value < 1e-10);
}

TEST_CASE("scaling regression") {
  Rng rng{83};
  std::vector<ScalingPoint> power;
  std::vector<ScalingPoint> flat;
  for (double n : {64.0, 256.0, 1024.0, 4096.0}) {
    power.push_back({n, 1.0 / std::sqrt(n), 0.0});
    flat.push_back({n, 0.3, 0.0});
  }
  const auto fit = scaling_regression(power, rng);
  CHECK(fit.slope == doctest::Approx(-0.5));
  CHECK(fit.ci_low <= fit.slope);
  CHECK(fit.ci_high >= fit.slope);
  CHECK(scaling_regression(flat, rng).slope == doctest::Approx(0.0));
  const std::vector<ScalingPoint> two(power.begin(), power.begin() + 2);
  CHECK_THROWS_AS(scaling_regression(two, rng), std::invalid_argument);
  std::vector<ScalingPoint> bad = power;
  bad[1].value = 0.0;
  CHECK_THROWS_AS(scaling_regression(bad, rng), std::invalid_argument);
}

TEST_CASE("mass function") {
  const TorusLattice cube{3, 8};
  const auto curve = estimate_mass_function(cube, {0.0, 50.0}, 10, 0.01, 10, 84);
  REQUIRE(curve.size() == 2);
  CHECK(curve[0].m_hat == 0.0);
  CHECK(curve[1].m_hat > 0.9);

  const TorusLattice ring{1, 2000};
  const auto line = estimate_mass_function(ring, {1.0}, 10, 0.01, 10, 85);
  CHECK(line[0].m_hat < 0.05);
}

TEST_CASE("mean, verdicts and replica farm") {
  const std::vector<double> values{1.0, 2.0, 3.0, 4.0};
  const auto est = mean_and_stderr(values);
  CHECK(est.mean == doctest::Approx(2.5));
  CHECK(est.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));

  const Verdict v{"tv", 0.01, 0.02, true};
  const auto j = nlohmann::json::parse(v.to_json());
  CHECK(j["test"] == "tv");
  CHECK(j["statistic"] == 0.01);
  CHECK(j["threshold"] == 0.02);
  CHECK(j["pass"] == true);

  auto draw = [](std::int64_t r) {
    Rng rng{86, static_cast<std::uint64_t>(r)};
    return rng();
  };
  CHECK(run_replicas(257, draw, 1) == run_replicas(257, draw, 4));
}
