#include "stir/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace stir {

std::int64_t default_cutoff(std::int64_t n) {
  auto m = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (m * m < n) {
    ++m;
  }
  while (m > 1 && (m - 1) * (m - 1) >= n) {
    --m;
  }
  return std::max<std::int64_t>(m, 1);
}

double default_horizon(std::int64_t n) { return std::pow(static_cast<double>(n), 0.125); }

CoupledState::CoupledState(const TorusLattice& lattice, CyclePermutation eta, std::int64_t cutoff)
    : lattice_{&lattice},
      eta_{std::move(eta)},
      kernel_{cutoff},
      n_{static_cast<std::int64_t>(lattice.vertex_count())} {
  if (eta_.size() != lattice.vertex_count()) {
    throw std::invalid_argument("permutation and lattice sizes differ");
  }
  if (n_ < 2) {
    throw std::invalid_argument("coupling needs N >= 2");
  }
  zeta_ = eta_.lengths();
  refresh_eta_rates();
  refresh_distance();
}

void CoupledState::refresh_eta_rates() {
  rates_ = instantaneous_rates(eta_, *lattice_);
  z_ = smoothed_split_rates(rates_.y_profile(), kernel_);
}

void CoupledState::refresh_distance() { scaled_distance_ = scaled_l1_distance(rates_.lengths, zeta_); }

namespace {

double zeta_merge_rate(const CycleType& zeta, std::int64_t n, std::size_t i, std::size_t j) {
  if (j >= zeta.size()) {
    return 0.0;
  }
  return static_cast<double>(2 * zeta[i] * zeta[j]) / static_cast<double>(n * (n - 1));
}

double zeta_split_rate(const CycleType& zeta, std::int64_t n, std::size_t i, std::int64_t l) {
  if (i >= zeta.size() || l < 1 || l >= zeta[i]) {
    return 0.0;
  }
  return static_cast<double>(zeta[i]) / static_cast<double>(n * (n - 1));
}

constexpr double kProbabilitySlack = 1e-9;

void check_probability_mass(double mass) {
  if (!(mass >= -kProbabilitySlack && mass <= 1.0 + kProbabilitySlack)) {
    throw std::logic_error("coupling decision probabilities leave [0, 1]");
  }
}

}  // namespace

std::optional<Jump> CoupledState::respond_to_stirring(const TranspositionEffect& effect, double alpha) const {
  if (const auto* merge = std::get_if<MergeEffect>(&effect)) {
    const double x = rates_.x_value(merge->i, merge->j);
    const double u = zeta_merge_rate(zeta_, n_, merge->i, merge->j);
    if (x <= 0.0) {
      throw std::logic_error("merge event on a pair with zero merge rate");
    }
    const double p = std::min(x, u) / x;
    check_probability_mass(p);
    if (alpha < p) {
      return Jump::merge(merge->i, merge->j);
    }
    return std::nullopt;
  }
  const auto& split = std::get<SplitEffect>(effect);
  const auto m = static_cast<std::int64_t>(split.length);
  const auto k = static_cast<std::int64_t>(split.k);
  const RateRow& z = z_[split.i];
  const std::int64_t zi = split.i < zeta_.size() ? zeta_[split.i] : 0;
  double cumulative = 0.0;
  for (std::int64_t l = 1; l < std::min(m, zi); ++l) {
    const double zl = z.value(l);
    const double vl = zeta_split_rate(zeta_, n_, split.i, l);
    if (zl <= 0.0) {
      continue;
    }
    const double w = 0.5 * (kernel_.weight_value(m, k, l) + kernel_.weight_value(m, m - k, l));
    cumulative += w * std::min(zl, vl) / zl;
    if (alpha < cumulative) {
      return Jump::split(split.i, l);
    }
  }
  check_probability_mass(cumulative);
  return std::nullopt;
}

double CoupledState::response_mass(const TranspositionEffect& effect) const {
  if (const auto* merge = std::get_if<MergeEffect>(&effect)) {
    const double x = rates_.x_value(merge->i, merge->j);
    return std::min(x, zeta_merge_rate(zeta_, n_, merge->i, merge->j)) / x;
  }
  const auto& split = std::get<SplitEffect>(effect);
  const auto m = static_cast<std::int64_t>(split.length);
  const auto k = static_cast<std::int64_t>(split.k);
  const std::int64_t zi = split.i < zeta_.size() ? zeta_[split.i] : 0;
  double mass = 0.0;
  for (std::int64_t l = 1; l < std::min(m, zi); ++l) {
    const double zl = z_[split.i].value(l);
    if (zl > 0.0) {
      const double w = 0.5 * (kernel_.weight_value(m, k, l) + kernel_.weight_value(m, m - k, l));
      mass += w * std::min(zl, zeta_split_rate(zeta_, n_, split.i, l)) / zl;
    }
  }
  return mass;
}

std::optional<Jump> CoupledState::compensate(double alpha) const {
  double cumulative = 0.0;
  for (std::size_t i = 0; i < zeta_.size(); ++i) {
    for (std::size_t j = i + 1; j < zeta_.size(); ++j) {
      cumulative += std::max(0.0, zeta_merge_rate(zeta_, n_, i, j) - rates_.x_value(i, j));
      if (alpha < cumulative) {
        return Jump::merge(i, j);
      }
    }
  }
  for (std::size_t i = 0; i < zeta_.size(); ++i) {
    for (std::int64_t l = 1; l < zeta_[i]; ++l) {
      const double zl = i < z_.size() ? z_[i].value(l) : 0.0;
      cumulative += std::max(0.0, zeta_split_rate(zeta_, n_, i, l) - zl);
      if (alpha < cumulative) {
        return Jump::split(i, l);
      }
    }
  }
  check_probability_mass(cumulative);
  return std::nullopt;
}

double CoupledState::compensation_mass() const {
  double mass = 0.0;
  for (std::size_t i = 0; i < zeta_.size(); ++i) {
    for (std::size_t j = i + 1; j < zeta_.size(); ++j) {
      mass += std::max(0.0, zeta_merge_rate(zeta_, n_, i, j) - rates_.x_value(i, j));
    }
    for (std::int64_t l = 1; l < zeta_[i]; ++l) {
      const double zl = i < z_.size() ? z_[i].value(l) : 0.0;
      mass += std::max(0.0, zeta_split_rate(zeta_, n_, i, l) - zl);
    }
  }
  return mass;
}

CouplingEvent CoupledState::stirring_event(double t, const Edge& b, double alpha) {
  CouplingEvent event;
  event.t = t;
  event.clock = ClockKind::stirring;
  const TranspositionEffect effect = eta_.preview(b.first, b.second);
  event.zeta_jump = respond_to_stirring(effect, alpha);
  event.eta_effect = eta_.apply_transposition(b);
  ++stirring_events_;
  if (event.zeta_jump) {
    zeta_ = apply_jump(zeta_, *event.zeta_jump);
  }
  refresh_eta_rates();
  refresh_distance();
  event.mismatch = !event.zeta_jump.has_value();
  if (!mismatch_time_) {
    if (event.mismatch) {
      mismatch_time_ = t;
    } else if (scaled_distance_ > 2 * kernel_.cutoff() * stirring_events_) {
      ++bound_violations_;
    }
  }
  event.scaled_distance = scaled_distance_;
  return event;
}

CouplingEvent CoupledState::compensating_event(double t, double alpha) {
  CouplingEvent event;
  event.t = t;
  event.clock = ClockKind::compensating;
  event.zeta_jump = compensate(alpha);
  if (event.zeta_jump) {
    zeta_ = apply_jump(zeta_, *event.zeta_jump);
    refresh_distance();
    event.mismatch = true;
    if (!mismatch_time_) {
      mismatch_time_ = t;
    }
  }
  event.scaled_distance = scaled_distance_;
  return event;
}

Rational CoupledState::mismatch_rate() const {
  const MeanFieldRates u = zeta_rates();
  const std::size_t count = std::max(rates_.lengths.size(), zeta_.size());
  Rational rho{0};
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      rho += abs(Rational{rates_.x(i, j) - u.merge(i, j)});
    }
    const std::int64_t m = i < rates_.lengths.size() ? rates_.lengths[i] : 0;
    const std::int64_t zi = i < zeta_.size() ? zeta_[i] : 0;
    for (std::int64_t l = 1; l < std::max(m, zi); ++l) {
      const Rational z = i < z_.size() ? z_[i].at(l) : Rational{0};
      rho += abs(Rational{z - u.split(i, l)});
    }
  }
  return rho;
}

std::string CouplingReport::to_json() const {
  nlohmann::json j;
  j["N"] = n;
  j["d"] = d;
  j["n"] = side;
  j["M"] = cutoff;
  j["T"] = horizon;
  j["tau"] = tau ? nlohmann::json(*tau) : nlohmann::json(nullptr);
  j["max_distance"] = max_distance;
  j["n_events"] = events;
  j["nu_events"] = stirring_events;
  j["bound_violations"] = bound_violations;
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& [t, dist] : distance_samples) {
    samples.push_back({t, dist});
  }
  j["distance_samples"] = std::move(samples);
  return j.dump();
}

CouplingReport run_coupling(const TorusLattice& lattice, double T, std::optional<std::int64_t> cutoff, Rng& rng,
                            const CouplingObserver& observer, std::optional<CyclePermutation> initial) {
  if (!(T >= 0.0)) {
    throw std::invalid_argument("horizon T must be nonnegative");
  }
  const auto n = static_cast<std::int64_t>(lattice.vertex_count());
  CyclePermutation eta = initial ? std::move(*initial) : CyclePermutation::uniform(lattice.vertex_count(), rng);
  CoupledState state{lattice, std::move(eta), cutoff.value_or(default_cutoff(n))};

  CouplingReport report;
  report.n = n;
  report.d = lattice.dimension();
  report.side = lattice.side();
  report.cutoff = state.kernel().cutoff();
  report.horizon = T;
  report.distance_samples.emplace_back(0.0, state.distance());

  double t = 0.0;
  while (true) {
    t += rng.exponential(2.0);
    if (t > T) {
      break;
    }
    const bool stirring = rng.uniform_index(2) == 0;
    CouplingEvent event;
    if (stirring) {
      const Edge& b = lattice.sample_edge(rng);
      event = state.stirring_event(t, b, rng.uniform());
    } else {
      event = state.compensating_event(t, rng.uniform());
    }
    ++report.events;
    report.distance_samples.emplace_back(t, state.distance());
    report.max_distance = std::max(report.max_distance, state.distance());
    if (observer) {
      observer(event, state);
    }
  }
  report.tau = state.mismatch_time();
  report.stirring_events = state.stirring_events();
  report.bound_violations = state.bound_violations();
  report.final_xi = state.eta_rates().lengths;
  report.final_zeta = state.zeta();
  return report;
}

}  // namespace stir
