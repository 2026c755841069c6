#include "andor/extraction.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "andor/errors.hpp"

namespace andor {

Decomposition Decomposition::all_and(const ValueTable& v) {
  return {0.5 * v.values, LatticeVector::zeros(v.n()), 0.0};
}

Decomposition Decomposition::even_split(const ValueTable& v) {
  std::vector<double> gamma(table_size(v.n()), 0.0);
  gamma[0] = 0.5 * v.empty_output();
  return {LatticeVector(v.n(), std::move(gamma)), LatticeVector::zeros(v.n()), 0.0};
}

Decomposition Decomposition::from_game(const GroundTruthGame& game, const ValueTable& v) {
  if (game.n() != v.n()) throw SizeError("game and table disagree on n");
  std::vector<double> dense(table_size(v.n()), 0.0);
  for (const auto& [t, c] : game.and_effects()) dense[t] = c;
  auto u_and = std::move(zeta_subsets(LatticeVector(v.n(), std::move(dense)))).release();
  for (std::size_t s = 0; s < u_and.size(); ++s) {
    u_and[s] += game.bias() - 0.5 * v.values[static_cast<Mask>(s)];
  }
  u_and[0] = 0.5 * v.empty_output();
  return {LatticeVector(v.n(), std::move(u_and)), LatticeVector::zeros(v.n()), 0.0};
}

void Decomposition::validate(const ValueTable& v) const {
  if (gamma.n() != v.n() || delta.n() != v.n()) {
    throw SizeError("decomposition over n = " + std::to_string(gamma.n()) +
                    " applied to a table over n = " + std::to_string(v.n()));
  }
  if (!(zeta_bound >= 0.0) || !std::isfinite(zeta_bound)) {
    throw InvariantError("zeta bound must be finite and non-negative");
  }
  const double box = zeta_bound + config::kInvariantSlack * std::max(1.0, zeta_bound);
  for (std::size_t s = 0; s < delta.size(); ++s) {
    if (std::abs(delta[static_cast<Mask>(s)]) > box) {
      throw InvariantError("delta at mask " + std::to_string(s) + " outside [-zeta, zeta]");
    }
  }
  if (delta[0] != 0.0) throw InvariantError("delta on the empty set must be 0");
  const double pin = 0.5 * v.empty_output();
  if (std::abs(gamma[0] - pin) > config::kInvariantSlack * std::max(1.0, std::abs(pin))) {
    throw InvariantError("gamma on the empty set must equal 0.5 v(x_empty)");
  }
}

ComponentSplit split_components(const ValueTable& v, const Decomposition& d) {
  d.validate(v);
  const std::size_t size = table_size(v.n());
  std::vector<double> u_and(size);
  std::vector<double> u_or(size);
  for (std::size_t s = 0; s < size; ++s) {
    const Mask m = static_cast<Mask>(s);
    const double half = 0.5 * (v.values[m] - d.delta[m]);
    u_and[s] = half + d.gamma[m];
    u_or[s] = half - d.gamma[m];
  }
  return {LatticeVector(v.n(), std::move(u_and)), LatticeVector(v.n(), std::move(u_or))};
}

double InteractionSet::l1() const {
  double sum = 0.0;
  for (std::size_t t = 1; t < i_and.size(); ++t) {
    sum += std::abs(i_and[static_cast<Mask>(t)]) + std::abs(i_or[static_cast<Mask>(t)]);
  }
  return sum;
}

double InteractionSet::full_gap() const {
  double sum = 0.0;
  for (std::size_t t = 1; t < i_and.size(); ++t) {
    sum += i_and[static_cast<Mask>(t)] + i_or[static_cast<Mask>(t)];
  }
  return sum;
}

InteractionSet extract(const ValueTable& v, const Decomposition& d) {
  const auto [u_and, u_or] = split_components(v, d);
  auto i_and = std::move(mobius_and(u_and)).release();
  auto i_or = std::move(mobius_or(u_or)).release();
  i_and[0] = 0.0;
  i_or[0] = 0.0;
  return {LatticeVector(v.n(), std::move(i_and)), LatticeVector(v.n(), std::move(i_or)),
          v.empty_output(), v.label};
}

double salience_threshold(std::span<const ValueTable> tables, double fraction) {
  if (tables.empty()) throw ArgumentError("salience threshold of an empty batch");
  if (!(fraction >= 0.0)) throw ArgumentError("salience fraction must be non-negative");
  double sum = 0.0;
  for (const auto& t : tables) sum += std::abs(t.full_output() - t.empty_output());
  return fraction * sum / static_cast<double>(tables.size());
}

double salience_threshold(std::span<const InteractionSet> sets, double fraction) {
  if (sets.empty()) throw ArgumentError("salience threshold of an empty batch");
  if (!(fraction >= 0.0)) throw ArgumentError("salience fraction must be non-negative");
  double sum = 0.0;
  for (const auto& s : sets) sum += std::abs(s.full_gap());
  return fraction * sum / static_cast<double>(sets.size());
}

std::size_t SalientSet::count(EffectKind kind, int order) const {
  std::size_t c = 0;
  for (const auto& e : effects) {
    if (e.kind == kind && order_of(e.mask) == order) ++c;
  }
  return c;
}

SalientSet filter_salient(const InteractionSet& set, double tau) {
  if (!(tau >= 0.0)) throw ArgumentError("salience threshold must be non-negative");
  SalientSet out;
  out.n = set.n();
  out.bias = set.bias;
  out.tau = tau;
  out.label = set.label;
  for (EffectKind kind : {EffectKind::kAnd, EffectKind::kOr}) {
    const LatticeVector& effects = set.effects(kind);
    for (std::size_t t = 1; t < effects.size(); ++t) {
      const double value = effects[static_cast<Mask>(t)];
      if (std::abs(value) > tau) out.effects.push_back({kind, static_cast<Mask>(t), value});
    }
  }
  return out;
}

}  // namespace andor
