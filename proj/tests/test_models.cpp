#include <gtest/gtest.h>

#include "andor/errors.hpp"
#include "andor/extraction.hpp"
#include "andor/metrics.hpp"
#include "andor/models.hpp"
#include "andor/oracle.hpp"
#include "test_support.hpp"

namespace andor {
namespace {

using test::as_vector;

// Literal evaluation of the game at every S, independent of realize_table.
std::vector<double> literal_table(const GroundTruthGame& g) {
  std::vector<double> v(table_size(g.n()), g.bias());
  for (std::size_t s = 0; s < v.size(); ++s) {
    for (const auto& [t, c] : g.and_effects()) {
      if ((s & t) == t) v[s] += c;
    }
    for (const auto& [t, c] : g.or_effects()) {
      if (s & t) v[s] += c;
    }
  }
  return v;
}

SparseGameSpec spec(int lo, int hi, std::size_t m, std::uint64_t seed) {
  SparseGameSpec s;
  s.effect_count = m;
  s.order_weights = uniform_order_weights(s.n, lo, hi);
  s.seed = seed;
  return s;
}

TEST(InteractionFunctionTable, AndDefinition) {
  const auto v = interaction_function_table(SubsetIndex::of({1, 2}, 3), 3.0, EffectKind::kAnd);
  EXPECT_EQ(as_vector(v.values), (std::vector<double>{0, 0, 0, 3, 0, 0, 0, 3}));
}

TEST(InteractionFunctionTable, OrDefinition) {
  const auto v = interaction_function_table(SubsetIndex::of({1}, 2), 2.0, EffectKind::kOr);
  EXPECT_EQ(as_vector(v.values), (std::vector<double>{0, 2, 0, 2}));
}

TEST(InteractionFunctionTable, AllAndExtractionGivesSingleEffect) {
  const auto v = interaction_function_table(SubsetIndex(0b10110, 5), -4.0, EffectKind::kAnd);
  const auto set = extract(v, Decomposition::all_and(v));
  for (std::size_t t = 1; t < set.i_and.size(); ++t) {
    EXPECT_EQ(set.i_and[static_cast<Mask>(t)], t == 0b10110 ? -4.0 : 0.0);
    EXPECT_EQ(set.i_or[static_cast<Mask>(t)], 0.0);
  }
}

TEST(InteractionFunctionTable, RejectsEmptySubset) {
  EXPECT_THROW(interaction_function_table(SubsetIndex(0, 3), 1.0, EffectKind::kAnd), ArgumentError);
}

TEST(GroundTruthGame, RejectsEmptySetEntries) {
  EXPECT_THROW(GroundTruthGame(3, {{0, 1.0}}, {}, 0.0), ArgumentError);
  EXPECT_THROW(GroundTruthGame(3, {}, {{0b1000, 1.0}}, 0.0), ArgumentError);
}

TEST(SampleSparseGame, ZeroEffectsGivesConstantTable) {
  const auto g = sample_sparse_game(spec(1, 3, 0, 5));
  EXPECT_EQ(g.effect_count(), 0u);
  const auto v = realize_table(g);
  for (double x : v.values.values()) EXPECT_EQ(x, g.bias());
}

TEST(SampleSparseGame, Deterministic) {
  const auto a = sample_sparse_game(spec(1, 3, 15, 42));
  const auto b = sample_sparse_game(spec(1, 3, 15, 42));
  EXPECT_EQ(a.and_effects(), b.and_effects());
  EXPECT_EQ(a.or_effects(), b.or_effects());
  EXPECT_EQ(a.bias(), b.bias());
  const auto c = sample_sparse_game(spec(1, 3, 15, 43));
  EXPECT_NE(a.and_effects(), c.and_effects());
}

TEST(SampleSparseGame, RespectsOrdersMagnitudesAndDistinctSubsets) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = spec(2, 4, 15, seed);
    const auto g = sample_sparse_game(s);
    EXPECT_EQ(g.effect_count(), 15u);
    for (auto kind : {EffectKind::kAnd, EffectKind::kOr}) {
      for (const auto& [t, c] : g.effects(kind)) {
        EXPECT_GE(order_of(t), 2);
        EXPECT_LE(order_of(t), 4);
        EXPECT_GE(std::abs(c), s.magnitude_floor);
        EXPECT_LE(std::abs(c), s.effect_range);
        if (kind == EffectKind::kOr) EXPECT_FALSE(g.and_effects().contains(t));
      }
    }
  }
}

TEST(SampleSparseGame, SingletonsAreAnd) {
  const auto g = sample_sparse_game(spec(1, 1, 10, 3));
  EXPECT_EQ(g.and_effects().size(), 10u);
  EXPECT_TRUE(g.or_effects().empty());
}

TEST(SampleSparseGame, InfeasibleCount) {
  EXPECT_THROW(sample_sparse_game(spec(1, 1, 11, 0)), ArgumentError);
  auto bad = spec(1, 3, 5, 0);
  bad.order_weights[0] += 0.5;
  EXPECT_THROW(sample_sparse_game(bad), ArgumentError);
}

TEST(RealizeTable, SmallGame) {
  const GroundTruthGame g(2, {{0b01, 1.0}, {0b10, 2.0}, {0b11, 2.0}}, {}, 0.0);
  EXPECT_EQ(as_vector(realize_table(g).values), (std::vector<double>{0, 1, 2, 5}));
}

TEST(RealizeTable, BiasOnly) {
  const GroundTruthGame g(4, {}, {}, 7.0);
  EXPECT_EQ(as_vector(realize_table(g).values), std::vector<double>(16, 7.0));
}

TEST(RealizeTable, SingleAndEffectMatchesInteractionFunction) {
  const GroundTruthGame g(4, {{0b0011, 2.5}}, {}, 0.0);
  EXPECT_EQ(as_vector(realize_table(g).values),
            as_vector(interaction_function_table(SubsetIndex(0b0011, 4), 2.5, EffectKind::kAnd).values));
}

TEST(RealizeTable, MatchesLiteralEvaluation) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = sample_sparse_game(spec(1, 5, 20, seed));
    const auto v = realize_table(g);
    const auto lit = literal_table(g);
    for (std::size_t s = 0; s < lit.size(); ++s) EXPECT_NEAR(v.values[static_cast<Mask>(s)], lit[s], 1e-10);
  }
}

TEST(RealizeTable, GroundTruthDecompositionRecoversEffects) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = sample_sparse_game(spec(1, 4, 15, seed));
    const auto v = realize_table(g);
    const auto d = Decomposition::from_game(g, v);
    const auto set = extract(v, d);
    EXPECT_NEAR(set.bias, g.bias(), 1e-12);
    for (std::size_t t = 1; t < set.i_and.size(); ++t) {
      const Mask m = static_cast<Mask>(t);
      const double want_and = g.and_effects().contains(m) ? g.and_effects().at(m) : 0.0;
      const double want_or = g.or_effects().contains(m) ? g.or_effects().at(m) : 0.0;
      EXPECT_NEAR(set.i_and[m], want_and, 1e-8);
      EXPECT_NEAR(set.i_or[m], want_or, 1e-8);
    }
  }
}

TEST(InjectOverfit, ZeroPairsIsIdentity) {
  const auto g = sample_sparse_game(spec(1, 3, 10, 1));
  OverfitSpec o;
  o.pair_count = 0;
  const auto h = inject_overfit(g, o);
  EXPECT_EQ(h.and_effects(), g.and_effects());
  EXPECT_EQ(h.or_effects(), g.or_effects());
}

TEST(InjectOverfit, AddsOffsettingHighOrderPairs) {
  const auto g = sample_sparse_game(spec(1, 3, 10, 1));
  OverfitSpec o;
  o.seed = 9;
  const auto h = inject_overfit(g, o);
  EXPECT_EQ(h.effect_count(), g.effect_count() + 2 * o.pair_count);
  double net = 0.0;
  int positive = 0;
  for (auto kind : {EffectKind::kAnd, EffectKind::kOr}) {
    for (const auto& [t, c] : h.effects(kind)) {
      if (g.uses_subset(t)) continue;
      EXPECT_GE(order_of(t), o.min_order);
      EXPECT_EQ(std::abs(c), o.magnitude);
      net += c;
      positive += c > 0;
    }
  }
  EXPECT_EQ(net, 0.0);
  EXPECT_EQ(positive, static_cast<int>(o.pair_count));
}

TEST(InjectOverfit, RaisesAverageOrder) {
  const auto g = sample_sparse_game(spec(1, 1, 6, 2));
  OverfitSpec o;
  o.magnitude = 5.0;
  const auto h = inject_overfit(g, o);
  auto eta = [](const GroundTruthGame& game) {
    const auto v = realize_table(game);
    return *average_order(order_profile(extract(v, Decomposition::from_game(game, v)), 1e-6));
  };
  EXPECT_GT(eta(h), eta(g));
}

TEST(InjectOverfit, TooFewSubsets) {
  const auto g = sample_sparse_game(spec(1, 1, 2, 0));
  OverfitSpec o;
  o.min_order = 10;
  o.pair_count = 1;
  EXPECT_THROW(inject_overfit(g, o), ArgumentError);
}

TEST(TinyNet, SampleEqualToBaselineGivesConstantTable) {
  const std::vector<int> widths{6, 8, 2};
  const auto net = TinyNet::random(widths, 3);
  const std::vector<double> x{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const auto v = net_value_table(net, {x, x}, 0);
  for (double y : v.values.values()) EXPECT_EQ(y, v.values[0]);
}

TEST(TinyNet, EvenOddsGiveZeroConfidence) {
  TinyNet::Layer l{{0.0, 0.0}, {0.0, 0.0}, 1, 2};
  const TinyNet net({l});
  EXPECT_EQ(net.confidence(std::vector<double>{1.0}, 0), 0.0);
}

TEST(TinyNet, LinearNetHasOnlyFirstOrderEffects) {
  const int n = 5;
  // Class scores w.x and 0: the confidence is linear in the input.
  TinyNet::Layer l;
  l.inputs = n;
  l.outputs = 2;
  l.weights = {0.3, -0.2, 0.5, 0.1, -0.4, 0, 0, 0, 0, 0};
  l.bias = {0.05, 0.0};
  const TinyNet net({l});
  const std::vector<double> x{1, 2, -1, 0.5, 1.5};
  const auto v = net_value_table(net, {x, std::vector<double>(n, 0.0)}, 0);
  const auto set = extract(v, Decomposition::all_and(v));
  for (std::size_t t = 1; t < set.i_and.size(); ++t) {
    if (order_of(static_cast<Mask>(t)) >= 2) EXPECT_NEAR(set.i_and[static_cast<Mask>(t)], 0.0, 1e-12);
  }
}

TEST(TinyNet, DummyInputHasNoInteractions) {
  const int n = 5;
  const std::vector<int> widths{n, 7, 2};
  auto layers = TinyNet::random(widths, 11).layers();
  for (int o = 0; o < layers[0].outputs; ++o) layers[0].weights[o * n + 2] = 0.0;
  const TinyNet net(layers);
  const std::vector<double> x{0.9, 0.1, 0.7, 0.3, 0.5};
  const auto v = net_value_table(net, {x, std::vector<double>(n, 0.5)}, 1);
  const auto set = extract(v, Decomposition::all_and(v));
  for (std::size_t t = 1; t < set.i_and.size(); ++t) {
    if ((t & 0b100) && order_of(static_cast<Mask>(t)) >= 2) {
      EXPECT_NEAR(set.i_and[static_cast<Mask>(t)], 0.0, 1e-12);
    }
  }
}

TEST(TinyNet, SaturatedProbabilityIsClamped) {
  TinyNet::Layer l{{1000.0, -1000.0}, {0.0, 0.0}, 1, 2};
  const TinyNet net({l});
  const double eps = config::kLogitClamp;
  EXPECT_NEAR(net.confidence(std::vector<double>{1.0}, 0), std::log((1 - eps) / eps), 1e-6);
  EXPECT_NEAR(net.confidence(std::vector<double>{1.0}, 1), std::log(eps / (1 - eps)), 1e-6);
}

TEST(TinyNet, WidthMismatch) {
  const std::vector<int> widths{4, 2};
  const auto net = TinyNet::random(widths, 0);
  EXPECT_THROW(net_value_table(net, {std::vector<double>(5, 0.0), std::vector<double>(5, 0.0)}, 0),
               ArgumentError);
}

TEST(MeanBaseline, Averages) {
  const std::vector<std::vector<double>> xs{{1, 2}, {3, 6}};
  EXPECT_EQ(mean_baseline(xs), (std::vector<double>{2, 4}));
}

}  // namespace
}  // namespace andor
