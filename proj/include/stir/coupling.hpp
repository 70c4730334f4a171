#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stir/cycle_permutation.hpp"
#include "stir/kernel.hpp"
#include "stir/partition.hpp"
#include "stir/rng.hpp"
#include "stir/split_merge.hpp"
#include "stir/stirring.hpp"
#include "stir/torus.hpp"

namespace stir {

// M = ceil(sqrt(N)).
std::int64_t default_cutoff(std::int64_t n);
// T* = N^{1/8}.
double default_horizon(std::int64_t n);

enum class ClockKind { stirring, compensating };

struct CouplingEvent {
  double t = 0.0;
  ClockKind clock = ClockKind::stirring;
  std::optional<TranspositionEffect> eta_effect;
  std::optional<Jump> zeta_jump;
  bool mismatch = false;        // this event is a mismatch
  std::int64_t scaled_distance = 0;  // N d(xi, zeta) after the event
};

// The joint state of a stirring permutation eta and a discrete split-merge
// partition zeta driven by shared clocks. Cycles of eta and parts of zeta
// are aligned by rank.
class CoupledState {
 public:
  CoupledState(const TorusLattice& lattice, CyclePermutation eta, std::int64_t cutoff);

  const TorusLattice& lattice() const { return *lattice_; }
  const CyclePermutation& eta() const { return eta_; }
  const CycleType& zeta() const { return zeta_; }
  OrderedPartition xi_partition() const { return OrderedPartition::from_lengths(rates_.lengths); }
  OrderedPartition zeta_partition() const { return OrderedPartition::from_lengths(zeta_); }
  const SmoothingKernel& kernel() const { return kernel_; }
  std::int64_t vertex_count() const { return n_; }

  // Rates of the current state: X, Y, Z from eta and U, V from zeta.
  const InstantaneousRates& eta_rates() const { return rates_; }
  const RateProfile& smoothed() const { return z_; }
  MeanFieldRates zeta_rates() const { return MeanFieldRates{zeta_}; }

  // N d(xi, zeta), exact.
  std::int64_t scaled_distance() const { return scaled_distance_; }
  double distance() const { return static_cast<double>(scaled_distance_) / static_cast<double>(n_); }
  bool mismatched() const { return mismatch_time_.has_value(); }
  std::optional<double> mismatch_time() const { return mismatch_time_; }
  std::int64_t stirring_events() const { return stirring_events_; }
  // Pre-mismatch events at which N d > 2 M (stirring events so far).
  std::int64_t bound_violations() const { return bound_violations_; }

  // What zeta does when eta undergoes `effect`, given the event uniform alpha.
  std::optional<Jump> respond_to_stirring(const TranspositionEffect& effect, double alpha) const;
  // What zeta does on a compensating-clock arrival.
  std::optional<Jump> compensate(double alpha) const;
  // Sum of the jump probabilities of respond_to_stirring / compensate.
  double response_mass(const TranspositionEffect& effect) const;
  double compensation_mass() const;

  CouplingEvent stirring_event(double t, const Edge& b, double alpha);
  CouplingEvent compensating_event(double t, double alpha);

  // rho = sum |X - U| + sum |Z - V| over the union of index sets.
  Rational mismatch_rate() const;

 private:
  void refresh_eta_rates();
  void refresh_distance();

  const TorusLattice* lattice_;
  CyclePermutation eta_;
  CycleType zeta_;
  SmoothingKernel kernel_;
  std::int64_t n_;
  InstantaneousRates rates_;
  RateProfile z_;
  std::int64_t scaled_distance_ = 0;
  std::optional<double> mismatch_time_;
  std::int64_t stirring_events_ = 0;
  std::int64_t bound_violations_ = 0;
};

struct CouplingReport {
  std::int64_t n = 0;
  int d = 0;
  int side = 0;
  std::int64_t cutoff = 0;
  double horizon = 0.0;
  std::optional<double> tau;
  double max_distance = 0.0;
  std::int64_t events = 0;
  std::int64_t stirring_events = 0;
  std::int64_t bound_violations = 0;
  std::vector<std::pair<double, double>> distance_samples;
  CycleType final_xi;
  CycleType final_zeta;

  std::string to_json() const;
};

using CouplingObserver = std::function<void(const CouplingEvent& event, const CoupledState& state)>;

// eta(0) uniform (or the given permutation), zeta(0) = p(eta(0)), superposed
// rate-two clock split evenly between the two event kinds.
CouplingReport run_coupling(const TorusLattice& lattice, double T, std::optional<std::int64_t> cutoff, Rng& rng,
                            const CouplingObserver& observer = {},
                            std::optional<CyclePermutation> initial = std::nullopt);

}  // namespace stir
