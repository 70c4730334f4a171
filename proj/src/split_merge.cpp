#include "stir/split_merge.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace stir {

MeanFieldRates::MeanFieldRates(CycleType lengths) : lengths_{std::move(lengths)} {
  for (std::int64_t l : lengths_) {
    if (l < 1) {
      throw std::invalid_argument("mean-field rates need positive lengths");
    }
    n_ += l;
  }
  if (n_ < 2) {
    throw std::invalid_argument("mean-field rates need N >= 2");
  }
  std::sort(lengths_.begin(), lengths_.end(), std::greater<>{});
}

MeanFieldRates MeanFieldRates::of(const OrderedPartition& p) {
  if (!p.is_discrete()) {
    throw std::invalid_argument("mean-field rates need a partition in Omega^N");
  }
  return MeanFieldRates{p.lengths()};
}

std::int64_t MeanFieldRates::merge_numerator(std::size_t i, std::size_t j) const {
  if (i >= j || j >= lengths_.size()) {
    return 0;
  }
  return 2 * lengths_[i] * lengths_[j];
}

std::int64_t MeanFieldRates::split_numerator(std::size_t j, std::int64_t k) const {
  if (j >= lengths_.size() || k < 1 || k >= lengths_[j]) {
    return 0;
  }
  return lengths_[j];
}

Rational MeanFieldRates::merge(std::size_t i, std::size_t j) const {
  return make_rational(merge_numerator(i, j), denominator());
}

Rational MeanFieldRates::split(std::size_t j, std::int64_t k) const {
  return make_rational(split_numerator(j, k), denominator());
}

double MeanFieldRates::merge_value(std::size_t i, std::size_t j) const {
  return static_cast<double>(merge_numerator(i, j)) / static_cast<double>(denominator());
}

double MeanFieldRates::split_value(std::size_t j, std::int64_t k) const {
  return static_cast<double>(split_numerator(j, k)) / static_cast<double>(denominator());
}

Rational MeanFieldRates::total() const {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < lengths_.size(); ++i) {
    for (std::size_t j = i + 1; j < lengths_.size(); ++j) {
      sum += merge_numerator(i, j);
    }
    for (std::int64_t k = 1; k < lengths_[i]; ++k) {
      sum += split_numerator(i, k);
    }
  }
  return make_rational(sum, denominator());
}

Jump sample_discrete_jump(const MeanFieldRates& rates, Rng& rng) {
  const CycleType& l = rates.lengths();
  auto r = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(rates.denominator())));
  // Merges grouped by i: sum_{j > i} 2 l_i l_j = 2 l_i (mass after i).
  std::int64_t after = rates.vertex_count();
  for (std::size_t i = 0; i < l.size(); ++i) {
    after -= l[i];
    const std::int64_t block = 2 * l[i] * after;
    if (r >= block) {
      r -= block;
      continue;
    }
    for (std::size_t j = i + 1; j < l.size(); ++j) {
      const std::int64_t w = 2 * l[i] * l[j];
      if (r < w) {
        return Jump::merge(i, j);
      }
      r -= w;
    }
  }
  for (std::size_t j = 0; j < l.size(); ++j) {
    const std::int64_t block = l[j] * (l[j] - 1);
    if (r < block) {
      return Jump::split(j, 1 + r / l[j]);
    }
    r -= block;
  }
  throw std::logic_error("discrete jump sampler ran past the total rate");
}

CycleType apply_jump(const CycleType& lengths, const Jump& jump) {
  CycleType out = lengths;
  if (jump.kind == Jump::Kind::merge) {
    if (jump.i >= jump.j || jump.j >= out.size()) {
      throw std::invalid_argument("merge needs i < j within the partition");
    }
    out[jump.i] += out[jump.j];
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(jump.j));
  } else {
    if (jump.i >= out.size() || jump.cut < 1 || jump.cut >= out[jump.i]) {
      throw std::invalid_argument("split needs 1 <= cut < l_i");
    }
    out.push_back(out[jump.i] - jump.cut);
    out[jump.i] = jump.cut;
  }
  std::sort(out.begin(), out.end(), std::greater<>{});
  return out;
}

OrderedPartition step_discrete(const OrderedPartition& p, Rng& rng) {
  const MeanFieldRates rates = MeanFieldRates::of(p);
  return OrderedPartition::from_lengths(apply_jump(p.lengths(), sample_discrete_jump(rates, rng)));
}

namespace {

std::size_t sample_part(const std::vector<double>& parts, Rng& rng) {
  double u = rng.uniform();
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (u < parts[i]) {
      return i;
    }
    u -= parts[i];
  }
  return parts.size() - 1;
}

}  // namespace

OrderedPartition step_canonical(const OrderedPartition& p, Rng& rng) {
  const std::vector<double>& parts = p.parts();
  const std::size_t i = sample_part(parts, rng);
  const std::size_t j = sample_part(parts, rng);
  std::vector<double> next = parts;
  if (i != j) {
    next[std::min(i, j)] += next[std::max(i, j)];
    next[std::max(i, j)] = 0.0;
  } else {
    const double u = rng.uniform_open();
    next.push_back((1.0 - u) * next[i]);
    next[i] *= u;
  }
  std::erase_if(next, [](double x) { return x < OrderedPartition::kMassTolerance; });
  double sum = 0.0;
  for (double x : next) {
    sum += x;
  }
  for (double& x : next) {
    x /= sum;
  }
  return OrderedPartition::from_weights(std::move(next));
}

ChainRun run_chain(ChainKind kind, const OrderedPartition& p0, double T, Rng& rng, const ChainObserver& observer) {
  if (!(T >= 0.0)) {
    throw std::invalid_argument("horizon T must be nonnegative");
  }
  if (kind == ChainKind::discrete && !p0.is_discrete()) {
    throw std::invalid_argument("the discrete chain needs a partition in Omega^N");
  }
  ChainRun run{p0, 0};
  if (observer) {
    observer(0.0, run.final_state);
  }
  double t = 0.0;
  while (true) {
    t += rng.exponential();
    if (t > T) {
      break;
    }
    run.final_state =
        kind == ChainKind::discrete ? step_discrete(run.final_state, rng) : step_canonical(run.final_state, rng);
    ++run.events;
    if (observer) {
      observer(t, run.final_state);
    }
  }
  return run;
}

}  // namespace stir
