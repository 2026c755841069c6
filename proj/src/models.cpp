#include "andor/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "andor/errors.hpp"
#include "andor/random.hpp"

namespace andor {

const char* to_string(EffectKind kind) { return kind == EffectKind::kAnd ? "and" : "or"; }

GroundTruthGame::GroundTruthGame(int n, std::map<Mask, double> and_effects,
                                 std::map<Mask, double> or_effects, double bias)
    : n_(n), and_(std::move(and_effects)), or_(std::move(or_effects)), bias_(bias) {
  check_variable_count(n);
  const Mask full = full_mask(n);
  for (const auto* effects : {&and_, &or_}) {
    for (const auto& [mask, value] : *effects) {
      if (mask == 0) throw ArgumentError("the empty set belongs to the bias, not to an effect");
      if (mask > full) throw ArgumentError("effect mask beyond n");
      if (!std::isfinite(value)) throw NumericalError("non-finite effect value");
    }
  }
  if (!std::isfinite(bias)) throw NumericalError("non-finite bias");
}

GroundTruthGame GroundTruthGame::with_effect(EffectKind kind, Mask t, double value) const {
  auto a = and_;
  auto o = or_;
  (kind == EffectKind::kAnd ? a : o)[t] = value;
  return {n_, std::move(a), std::move(o), bias_};
}

ValueTable interaction_function_table(const SubsetIndex& t, double c, EffectKind kind) {
  if (t.empty()) throw ArgumentError("interaction function needs a nonempty subset");
  const int n = t.n();
  std::vector<double> values(table_size(n), 0.0);
  for (std::size_t s = 0; s < values.size(); ++s) {
    const Mask m = static_cast<Mask>(s);
    const bool triggered = kind == EffectKind::kAnd ? (m & t.bits()) == t.bits() : (m & t.bits()) != 0;
    if (triggered) values[s] = c;
  }
  return {LatticeVector(n, std::move(values)), {},
          std::string("interaction ") + to_string(kind) + " mask=" + std::to_string(t.bits())};
}

std::vector<double> uniform_order_weights(int n, int lo, int hi) {
  check_variable_count(n);
  if (lo < 1 || hi > n || lo > hi) throw ArgumentError("order range outside 1..n");
  std::vector<double> w(n, 0.0);
  for (int k = lo; k <= hi; ++k) w[k - 1] = 1.0 / (hi - lo + 1);
  return w;
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Mask random_subset_of_order(Rng& rng, int n, int k) {
  std::vector<int> vars(n);
  std::iota(vars.begin(), vars.end(), 0);
  Mask m = 0;
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(vars[i], vars[j]);
    m |= Mask{1} << vars[i];
  }
  return m;
}

// Unused subset of order k: a few rejection draws, then a uniform pick from
// the enumerated remainder.
Mask draw_unused(Rng& rng, int n, int k, const std::vector<bool>& used) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Mask m = random_subset_of_order(rng, n, k);
    if (!used[m]) return m;
  }
  std::vector<Mask> free;
  for (std::size_t s = 1; s < used.size(); ++s) {
    if (!used[s] && order_of(static_cast<Mask>(s)) == k) free.push_back(static_cast<Mask>(s));
  }
  return free[rng.below(free.size())];
}

}  // namespace

GroundTruthGame sample_sparse_game(const SparseGameSpec& spec) {
  const int n = spec.n;
  check_variable_count(n);
  if (static_cast<int>(spec.order_weights.size()) != n) {
    throw ArgumentError("order_weights must have one entry per order 1..n");
  }
  double total = 0.0;
  for (double w : spec.order_weights) {
    if (!(w >= 0.0)) throw ArgumentError("order weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ArgumentError("order weights must sum to 1");
  if (!(spec.magnitude_floor >= 0.0) || spec.magnitude_floor > spec.effect_range) {
    throw ArgumentError("magnitude floor must lie in [0, effect_range]");
  }

  std::vector<double> capacity(n, 0.0);
  double available = 0.0;
  for (int k = 1; k <= n; ++k) {
    if (spec.order_weights[k - 1] > 0.0) capacity[k - 1] = binomial(n, k);
    available += capacity[k - 1];
  }
  if (static_cast<double>(spec.effect_count) > available ||
      static_cast<double>(spec.effect_count) > std::ldexp(1.0, n + 1)) {
    throw ArgumentError("cannot place " + std::to_string(spec.effect_count) +
                        " effects on distinct subsets of the weighted orders");
  }

  Rng rng(spec.seed);
  std::vector<bool> used(table_size(n), false);
  std::map<Mask, double> and_effects;
  std::map<Mask, double> or_effects;
  for (std::size_t e = 0; e < spec.effect_count; ++e) {
    double mass = 0.0;
    for (int k = 1; k <= n; ++k) {
      if (capacity[k - 1] >= 1.0) mass += spec.order_weights[k - 1];
    }
    double r = rng.uniform() * mass;
    int order = 0;
    for (int k = 1; k <= n; ++k) {
      if (capacity[k - 1] < 1.0 || spec.order_weights[k - 1] <= 0.0) continue;
      order = k;
      r -= spec.order_weights[k - 1];
      if (r < 0.0) break;
    }
    const Mask t = draw_unused(rng, n, order, used);
    used[t] = true;
    capacity[order - 1] -= 1.0;
    const bool is_or = order >= 2 && rng.coin(spec.or_probability);
    const double value = rng.sign() * rng.uniform(spec.magnitude_floor, spec.effect_range);
    (is_or ? or_effects : and_effects)[t] = value;
  }
  const double bias = rng.uniform(-spec.bias_range, spec.bias_range);
  return {n, std::move(and_effects), std::move(or_effects), bias};
}

ValueTable realize_table(const GroundTruthGame& game, std::string label) {
  const int n = game.n();
  const std::size_t size = table_size(n);
  const Mask full = full_mask(n);

  std::vector<double> dense_and(size, 0.0);
  for (const auto& [t, c] : game.and_effects()) dense_and[t] = c;
  const LatticeVector and_part = zeta_subsets(LatticeVector(n, std::move(dense_and)));

  std::vector<double> dense_or(size, 0.0);
  double or_total = 0.0;
  for (const auto& [t, c] : game.or_effects()) {
    dense_or[t] = c;
    or_total += c;
  }
  // sum_{T cap S != 0} I_T = (sum of all) - sum_{T subset N\S} I_T
  const LatticeVector or_below = zeta_subsets(LatticeVector(n, std::move(dense_or)));

  std::vector<double> values(size);
  for (std::size_t s = 0; s < size; ++s) {
    const Mask m = static_cast<Mask>(s);
    values[s] = game.bias() + and_part[m] + (or_total - or_below[full & ~m]);
  }
  return {LatticeVector(n, std::move(values)), std::move(label),
          "game effects=" + std::to_string(game.effect_count())};
}

GroundTruthGame inject_overfit(const GroundTruthGame& game, const OverfitSpec& spec) {
  const int n = game.n();
  if (spec.min_order < 1 || spec.min_order > n) {
    throw ArgumentError("overfit min_order must lie in 1..n");
  }
  if (spec.pair_count == 0) return game;

  std::vector<Mask> candidates;
  for (std::size_t s = 1; s < table_size(n); ++s) {
    const Mask m = static_cast<Mask>(s);
    if (order_of(m) >= spec.min_order && !game.uses_subset(m)) candidates.push_back(m);
  }
  if (candidates.size() < 2 * spec.pair_count) {
    throw ArgumentError("only " + std::to_string(candidates.size()) +
                        " unused subsets of order >= " + std::to_string(spec.min_order) +
                        " for " + std::to_string(spec.pair_count) + " offsetting pairs");
  }

  Rng rng(spec.seed);
  GroundTruthGame out = game;
  for (std::size_t i = 0; i < 2 * spec.pair_count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
    const EffectKind kind = rng.coin(spec.or_probability) ? EffectKind::kOr : EffectKind::kAnd;
    const double value = (i % 2 == 0) ? spec.magnitude : -spec.magnitude;
    out = out.with_effect(kind, candidates[i], value);
  }
  return out;
}

TinyNet::TinyNet(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ArgumentError("network needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Layer& l = layers_[i];
    if (l.inputs < 1 || l.outputs < 1 ||
        l.weights.size() != static_cast<std::size_t>(l.inputs) * l.outputs ||
        l.bias.size() != static_cast<std::size_t>(l.outputs)) {
      throw ArgumentError("layer " + std::to_string(i) + " has inconsistent shapes");
    }
    if (i > 0 && layers_[i - 1].outputs != l.inputs) {
      throw ArgumentError("layer " + std::to_string(i) + " input width mismatch");
    }
  }
  if (layers_.back().outputs < 2) throw ArgumentError("output head needs at least two classes");
}

TinyNet TinyNet::random(std::span<const int> widths, std::uint64_t seed) {
  if (widths.size() < 2) throw ArgumentError("need input and output widths");
  Rng rng(seed);
  std::vector<Layer> layers;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    Layer l;
    l.inputs = widths[i];
    l.outputs = widths[i + 1];
    if (l.inputs < 1 || l.outputs < 1) throw ArgumentError("layer widths must be positive");
    const double scale = std::sqrt(3.0 / l.inputs);
    l.weights.resize(static_cast<std::size_t>(l.inputs) * l.outputs);
    for (double& w : l.weights) w = rng.uniform(-scale, scale);
    l.bias.resize(l.outputs);
    for (double& b : l.bias) b = rng.uniform(-0.1, 0.1);
    layers.push_back(std::move(l));
  }
  return TinyNet(std::move(layers));
}

std::vector<double> TinyNet::scores(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != input_width()) {
    throw ArgumentError("input width " + std::to_string(x.size()) + " != network width " +
                        std::to_string(input_width()));
  }
  std::vector<double> act(x.begin(), x.end());
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const Layer& l = layers_[li];
    std::vector<double> next(l.bias);
    for (int o = 0; o < l.outputs; ++o) {
      const double* row = &l.weights[static_cast<std::size_t>(o) * l.inputs];
      for (int i = 0; i < l.inputs; ++i) next[o] += row[i] * act[i];
    }
    if (li + 1 < layers_.size()) {
      for (double& a : next) a = std::max(a, 0.0);
    }
    act = std::move(next);
  }
  return act;
}

double TinyNet::confidence(std::span<const double> x, int class_index) const {
  if (class_index < 0 || class_index >= class_count()) throw ArgumentError("class index out of range");
  const auto s = scores(x);
  const double top = *std::max_element(s.begin(), s.end());
  double target = 0.0;
  double rest = 0.0;
  for (int c = 0; c < class_count(); ++c) {
    const double e = std::exp(s[c] - top);
    (c == class_index ? target : rest) += e;
  }
  const double p = target / (target + rest);
  constexpr double eps = config::kLogitClamp;
  if (p < eps || rest == 0.0 || p > 1.0 - eps) {
    const double clipped = std::clamp(p, eps, 1.0 - eps);
    return std::log(clipped / (1.0 - clipped));
  }
  // log(p / (1 - p)) without forming 1 - p.
  return std::log(target) - std::log(rest);
}

std::vector<double> MaskingScheme::masked(Mask s) const {
  if (sample.size() != baseline.size()) throw ArgumentError("sample and baseline widths differ");
  std::vector<double> x(baseline);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if ((s >> i) & 1U) x[i] = sample[i];
  }
  return x;
}

std::vector<double> mean_baseline(std::span<const std::vector<double>> samples) {
  if (samples.empty()) throw ArgumentError("mean baseline of no samples");
  std::vector<double> mean(samples.front().size(), 0.0);
  for (const auto& x : samples) {
    if (x.size() != mean.size()) throw ArgumentError("samples have different widths");
    for (std::size_t i = 0; i < x.size(); ++i) mean[i] += x[i];
  }
  for (double& m : mean) m /= static_cast<double>(samples.size());
  return mean;
}

ValueTable net_value_table(const TinyNet& net, const MaskingScheme& scheme, int class_index,
                           std::string label) {
  const int n = static_cast<int>(scheme.sample.size());
  check_variable_count(n);
  if (n != net.input_width() || scheme.baseline.size() != scheme.sample.size()) {
    throw ArgumentError("network width " + std::to_string(net.input_width()) +
                        " does not match masking scheme width " + std::to_string(n));
  }
  if (class_index < 0 || class_index >= net.class_count()) throw ArgumentError("class index out of range");
  const auto size = static_cast<std::int64_t>(table_size(n));
  std::vector<double> values(table_size(n));
#pragma omp parallel for schedule(static) if (n >= 10)
  for (std::int64_t s = 0; s < size; ++s) {
    values[s] = net.confidence(scheme.masked(static_cast<Mask>(s)), class_index);
  }
  return {LatticeVector(n, std::move(values)), std::move(label),
          "tinynet class=" + std::to_string(class_index)};
}

}  // namespace andor
