#include "andor/population.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "andor/errors.hpp"
#include "andor/random.hpp"

namespace andor {

namespace {

// Stream tags keep the draws of different generator roles apart.
constexpr std::uint64_t kGameStream = 1;
constexpr std::uint64_t kChoiceStream = 2;
constexpr std::uint64_t kOverfitStream = 3;
constexpr std::uint64_t kSharedStream = 4;
constexpr std::uint64_t kTrainStream = 5;
constexpr std::uint64_t kTestStream = 6;
constexpr std::uint64_t kInputStream = 7;

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t role, std::size_t index) {
  return Rng::derive(seed, (role << 40) | index).next();
}

GroundTruthGame merge(const GroundTruthGame& low, const GroundTruthGame& high) {
  auto and_effects = low.and_effects();
  auto or_effects = low.or_effects();
  for (const auto& [t, c] : high.and_effects()) and_effects[t] = c;
  for (const auto& [t, c] : high.or_effects()) or_effects[t] = c;
  return {low.n(), std::move(and_effects), std::move(or_effects), low.bias()};
}

}  // namespace

std::string sample_label(const std::string& prefix, std::size_t index) {
  char digits[32];
  std::snprintf(digits, sizeof digits, "%03zu", index);
  return prefix + "_" + digits;
}

std::vector<PopulationSample> game_population(const GamePopulationSpec& spec) {
  std::vector<PopulationSample> out;
  out.reserve(spec.samples);
  for (std::size_t i = 0; i < spec.samples; ++i) {
    SparseGameSpec g = spec.game;
    g.seed = stream_seed(spec.seed, kGameStream, i);
    GroundTruthGame game = sample_sparse_game(g);
    ValueTable table = realize_table(game, sample_label(spec.prefix, i));
    out.push_back({std::move(table), std::move(game), false});
  }
  return out;
}

std::vector<PopulationSample> confusing_population(const ConfusingPopulationSpec& spec) {
  if (!(spec.overfit_fraction >= 0.0 && spec.overfit_fraction <= 1.0)) {
    throw ArgumentError("overfit fraction must lie in [0, 1]");
  }
  std::vector<PopulationSample> out = game_population(spec.base);
  const auto count = static_cast<std::size_t>(std::llround(spec.overfit_fraction * static_cast<double>(out.size())));

  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::derive(spec.base.seed, kChoiceStream);
  for (std::size_t k = 0; k < count; ++k) {
    std::swap(order[k], order[k + rng.below(order.size() - k)]);
  }
  for (std::size_t k = 0; k < count; ++k) {
    PopulationSample& s = out[order[k]];
    OverfitSpec o = spec.overfit;
    o.seed = stream_seed(spec.base.seed, kOverfitStream, order[k]);
    GroundTruthGame game = inject_overfit(*s.game, o);
    s.table = realize_table(game, s.table.label);
    s.game = std::move(game);
    s.injected = true;
  }
  return out;
}

GeneralizationPair generalization_pair(const GeneralizationSpec& spec) {
  const int high_max = spec.high_max_order == 0 ? spec.n : spec.high_max_order;
  if (spec.shared_max_order < 1 || spec.high_min_order <= spec.shared_max_order ||
      spec.high_min_order > high_max || high_max > spec.n) {
    throw ArgumentError("need 1 <= shared_max_order < high_min_order <= high_max_order <= n");
  }
  SparseGameSpec low;
  low.n = spec.n;
  low.effect_count = spec.shared_effects;
  low.order_weights = uniform_order_weights(spec.n, 1, spec.shared_max_order);
  low.effect_range = spec.effect_range;
  low.magnitude_floor = spec.magnitude_floor;
  SparseGameSpec high = low;
  high.effect_count = spec.high_effects;
  high.order_weights = uniform_order_weights(spec.n, spec.high_min_order, high_max);
  high.bias_range = 0.0;

  GeneralizationPair pair;
  for (std::size_t i = 0; i < spec.samples; ++i) {
    low.seed = stream_seed(spec.seed, kSharedStream, i);
    const GroundTruthGame shared = sample_sparse_game(low);
    for (const bool train : {true, false}) {
      high.seed = stream_seed(spec.seed, train ? kTrainStream : kTestStream, i);
      GroundTruthGame game = merge(shared, sample_sparse_game(high));
      ValueTable table = realize_table(game, sample_label(train ? "train" : "test", i));
      (train ? pair.train : pair.test).push_back({std::move(table), std::move(game), false});
    }
  }
  return pair;
}

std::vector<PopulationSample> net_population(const NetPopulationSpec& spec) {
  check_variable_count(spec.n);
  if (spec.classes < 2) throw ArgumentError("a network needs at least two classes");
  std::vector<int> widths{spec.n};
  widths.insert(widths.end(), spec.hidden.begin(), spec.hidden.end());
  widths.push_back(spec.classes);
  const TinyNet net = TinyNet::random(widths, spec.seed);

  Rng rng = Rng::derive(spec.seed, kInputStream);
  std::vector<std::vector<double>> inputs(spec.samples, std::vector<double>(spec.n));
  for (auto& x : inputs) {
    for (double& xi : x) xi = rng.uniform();
  }
  const std::vector<double> baseline = mean_baseline(inputs);

  std::vector<PopulationSample> out;
  out.reserve(spec.samples);
  for (std::size_t i = 0; i < spec.samples; ++i) {
    const std::vector<double> scores = net.scores(inputs[i]);
    const int target = static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
    MaskingScheme scheme{inputs[i], baseline};
    ValueTable table = net_value_table(net, scheme, target, sample_label(spec.prefix, i));
    table.meta = "class " + std::to_string(target);
    out.push_back({std::move(table), std::nullopt, false});
  }
  return out;
}

}  // namespace andor
