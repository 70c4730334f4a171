#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "stir/coupling.hpp"
#include "stir/stats.hpp"

using namespace stir;

TEST_CASE("defaults") {
  CHECK(default_cutoff(64) == 8);
  CHECK(default_cutoff(65) == 9);
  CHECK(default_cutoff(2) == 2);
  CHECK(default_horizon(256) == doctest::Approx(2.0));
}

TEST_CASE("zero horizon") {
  const TorusLattice lattice{2, 4};
  Rng rng{71};
  const auto report = run_coupling(lattice, 0.0, std::nullopt, rng);
  CHECK_FALSE(report.tau.has_value());
  CHECK(report.max_distance == 0.0);
  CHECK(report.events == 0);
  CHECK(report.final_xi == report.final_zeta);
  const auto j = nlohmann::json::parse(report.to_json());
  CHECK(j["tau"].is_null());
  CHECK(j["N"] == 16);
  CHECK(j["M"] == 4);
  for (const char* key : {"d", "n", "T", "max_distance", "n_events", "distance_samples"}) {
    CHECK(j.contains(key));
  }
}

TEST_CASE("mismatch rate by hand") {
  const TorusLattice pair{1, 2};
  CHECK(CoupledState{pair, CyclePermutation{2}, 2}.mismatch_rate() == 0);
  const std::vector<Vertex> swap{1, 0};
  CHECK(CoupledState{pair, CyclePermutation::from_successors(swap), 2}.mismatch_rate() == 0);

  // Ring of four, identity: adjacent singletons have X = 1/4 against U = 1/6,
  // the two opposite pairs X = 0 against 1/6.
  const TorusLattice ring{1, 4};
  CHECK(CoupledState{ring, CyclePermutation{4}, 2}.mismatch_rate() == make_rational(2, 3));

  // One four-cycle along the ring: Y = (1/2, 0, 1/2), smoothed by the M = 2
  // band to Z = (2/5, 1/5, 2/5), against V = 1/3 at each cut.
  const std::vector<Vertex> cycle{1, 2, 3, 0};
  const CoupledState four{ring, CyclePermutation::from_successors(cycle), 2};
  CHECK(four.smoothed()[0].at(1) == make_rational(2, 5));
  CHECK(four.smoothed()[0].at(2) == make_rational(1, 5));
  CHECK(four.mismatch_rate() == make_rational(4, 15));
}

TEST_CASE("mean-field lattices never mismatch") {
  // On the triangle every pair of vertices is an edge, so X = U and Z = V.
  const TorusLattice triangle{1, 3};
  for (int r = 0; r < 200; ++r) {
    Rng rng{72, static_cast<std::uint64_t>(r)};
    const auto report = run_coupling(triangle, 5.0, std::nullopt, rng, [](const CouplingEvent& e, const CoupledState& s) {
      CHECK_FALSE(e.mismatch);
      CHECK(s.mismatch_rate() == 0);
    });
    CHECK_FALSE(report.tau.has_value());
    CHECK(report.max_distance == 0.0);
  }
}

TEST_CASE("merges with X <= U always merge zeta") {
  const TorusLattice lattice{2, 4};
  Rng rng{73};
  int checked = 0;
  for (int s = 0; s < 200; ++s) {
    const CoupledState state{lattice, CyclePermutation::uniform(lattice.vertex_count(), rng), 4};
    const MeanFieldRates u = state.zeta_rates();
    for (const Edge& b : lattice.edges()) {
      const auto effect = state.eta().preview(b.first, b.second);
      if (!is_merge(effect)) {
        continue;
      }
      const auto& m = std::get<MergeEffect>(effect);
      if (state.eta_rates().x(m.i, m.j) > u.merge(m.i, m.j)) {
        continue;
      }
      ++checked;
      CHECK(state.response_mass(effect) == doctest::Approx(1.0));
      for (double alpha : {0.0, 0.3, 0.999999}) {
        const auto jump = state.respond_to_stirring(effect, alpha);
        REQUIRE(jump.has_value());
        CHECK(*jump == Jump::merge(m.i, m.j));
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("zeta jumps at the mean-field rates") {
  // Frozen state; each arrival of the rate-two clock is a stirring event with
  // a uniform edge or a compensating event, so jump J has frequency U_J / 2.
  const TorusLattice lattice{2, 3};
  Rng rng{74};
  const CoupledState state{lattice, CyclePermutation::uniform(lattice.vertex_count(), rng), 3};
  constexpr int kEvents = 1000000;
  std::map<std::tuple<int, std::size_t, std::size_t, std::int64_t>, std::int64_t> counts;
  for (int s = 0; s < kEvents; ++s) {
    std::optional<Jump> jump;
    if (rng.bernoulli(0.5)) {
      const Edge& b = lattice.sample_edge(rng);
      jump = state.respond_to_stirring(state.eta().preview(b.first, b.second), rng.uniform());
    } else {
      jump = state.compensate(rng.uniform());
    }
    if (jump) {
      ++counts[{static_cast<int>(jump->kind), jump->i, jump->j, jump->cut}];
    }
  }
  const MeanFieldRates u = state.zeta_rates();
  const auto& lengths = state.zeta();
  std::int64_t matched = 0;
  auto check = [&](std::tuple<int, std::size_t, std::size_t, std::int64_t> key, const Rational& rate) {
    const double p = to_double(rate) / 2.0;
    const double sigma = std::sqrt(kEvents * p * (1.0 - p));
    CHECK(std::abs(static_cast<double>(counts[key]) - kEvents * p) <= 3.0 * sigma + 1.0);
    matched += counts[key];
  };
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    for (std::size_t j = i + 1; j < lengths.size(); ++j) {
      check({static_cast<int>(Jump::Kind::merge), i, j, 0}, u.merge(i, j));
    }
    for (std::int64_t l = 1; l < lengths[i]; ++l) {
      check({static_cast<int>(Jump::Kind::split), i, 0, l}, u.split(i, l));
    }
  }
  std::int64_t total = 0;
  for (const auto& [key, c] : counts) {
    total += c;
  }
  CHECK(matched == total);
}

TEST_CASE("distance bookkeeping along coupled paths") {
  const TorusLattice lattice{3, 4};
  for (int r = 0; r < 20; ++r) {
    Rng rng{75, static_cast<std::uint64_t>(r)};
    std::int64_t max_scaled = 0;
    const auto report = run_coupling(lattice, 3.0, std::nullopt, rng, [&](const CouplingEvent& e, const CoupledState& s) {
      const auto xi = s.eta().lengths();
      CHECK(e.scaled_distance == scaled_l1_distance(xi, s.zeta()));
      CHECK(s.distance() == doctest::Approx(l1_distance(s.xi_partition(), s.zeta_partition())));
      CHECK(s.eta_rates().total() == 1);
      CHECK(s.mismatch_rate() >= 0);
      if (!s.mismatched()) {
        CHECK(e.scaled_distance <= 2 * s.kernel().cutoff() * s.stirring_events());
      }
      max_scaled = std::max(max_scaled, e.scaled_distance);
    });
    CHECK(report.bound_violations == 0);
    CHECK(report.max_distance == doctest::Approx(static_cast<double>(max_scaled) / 64.0));
  }
}

TEST_CASE("coupling marginals") {
  // From the identity, N = 6, t = 3: zeta against the discrete chain and eta
  // against plain stirring.
  const TorusLattice lattice{1, 6};
  constexpr int kReplicas = 30000;
  EmpiricalLaw coupled_zeta;
  EmpiricalLaw coupled_eta;
  EmpiricalLaw chain;
  EmpiricalLaw stirring;
  const auto singletons = OrderedPartition::from_lengths({1, 1, 1, 1, 1, 1});
  for (int r = 0; r < kReplicas; ++r) {
    Rng rng{76, static_cast<std::uint64_t>(r)};
    const auto report = run_coupling(lattice, 3.0, std::nullopt, rng, {}, CyclePermutation{6});
    coupled_zeta.add(report.final_zeta);
    coupled_eta.add(report.final_xi);
    Rng other{77, static_cast<std::uint64_t>(r)};
    chain.add(run_chain(ChainKind::discrete, singletons, 3.0, other).final_state.lengths());
    CyclePermutation perm{6};
    run_stirring(lattice, perm, 3.0, other);
    stirring.add(perm.lengths());
  }
  CHECK(tv_distance(coupled_zeta, chain) < 0.03);
  CHECK(tv_distance(coupled_eta, stirring) < 0.03);
  // the start is far from stationary, so the comparison has teeth
  CHECK(tv_distance(chain, ewens_law(6)) > 0.1);
}
