#include <gtest/gtest.h>

#include "andor/errors.hpp"
#include "andor/extraction.hpp"
#include "andor/oracle.hpp"
#include "test_support.hpp"

namespace andor {
namespace {

using test::as_vector;
using test::lattice;

double tolerance_for(const ValueTable& v) { return 1e-8 * std::max(1.0, v.values.max_abs()); }

TEST(Decomposition, AllAndSplit) {
  const auto v = test::random_table(5, 1);
  const auto [u_and, u_or] = split_components(v, Decomposition::all_and(v));
  EXPECT_EQ(as_vector(u_and), as_vector(v.values));
  EXPECT_EQ(u_or.max_abs(), 0.0);
}

TEST(Decomposition, EvenSplit) {
  const auto v = test::random_table(5, 2);
  const auto [u_and, u_or] = split_components(v, Decomposition::even_split(v));
  EXPECT_EQ(u_and[0], v.empty_output());
  EXPECT_EQ(u_or[0], 0.0);
  for (std::size_t s = 1; s < v.values.size(); ++s) EXPECT_EQ(u_and[static_cast<Mask>(s)], u_or[static_cast<Mask>(s)]);
}

TEST(Decomposition, ComponentsSumToDenoisedTable) {
  const auto v = test::random_table(4, 3);
  std::vector<double> gamma = test::as_vector(test::random_lattice(4, 4));
  std::vector<double> delta = test::as_vector(test::random_lattice(4, 5, 0.1));
  gamma[0] = 0.5 * v.empty_output();
  delta[0] = 0.0;
  const Decomposition d{LatticeVector(4, gamma), LatticeVector(4, delta), 0.1};
  const auto [u_and, u_or] = split_components(v, d);
  for (std::size_t s = 0; s < v.values.size(); ++s) {
    const Mask m = static_cast<Mask>(s);
    EXPECT_NEAR(u_and[m] + u_or[m], v.values[m] - d.delta[m], 1e-12);
  }
}

TEST(Decomposition, RejectsBrokenInvariants) {
  const auto v = test::random_table(3, 6);
  auto d = Decomposition::even_split(v);
  auto delta = as_vector(d.delta);
  delta[3] = 0.5;
  EXPECT_THROW(split_components(v, {d.gamma, LatticeVector(3, delta), 0.1}), InvariantError);
  auto gamma = as_vector(d.gamma);
  gamma[0] += 1.0;
  EXPECT_THROW(split_components(v, {LatticeVector(3, gamma), d.delta, 0.0}), InvariantError);
  delta.assign(8, 0.0);
  delta[0] = 0.01;
  EXPECT_THROW(split_components(v, {d.gamma, LatticeVector(3, delta), 0.1}), InvariantError);
}

TEST(Extract, AllAndOnFourEntries) {
  const ValueTable v{lattice({0, 1, 2, 5}), "", ""};
  const auto set = extract(v, Decomposition::all_and(v));
  EXPECT_EQ(set.bias, 0.0);
  EXPECT_EQ(as_vector(set.i_and), (std::vector<double>{0, 1, 2, 2}));
  EXPECT_EQ(set.i_or.max_abs(), 0.0);
}

TEST(Extract, OrFunctionWithOrPinnedSplit) {
  const int n = 4;
  const Mask t = 0b1001;
  const auto v = interaction_function_table(SubsetIndex(t, n), 3.0, EffectKind::kOr);
  // gamma = -0.5 v off the empty set sends everything to OR.
  std::vector<double> gamma(table_size(n));
  for (std::size_t s = 1; s < gamma.size(); ++s) gamma[s] = -0.5 * v.values[static_cast<Mask>(s)];
  gamma[0] = 0.5 * v.empty_output();
  const Decomposition d{LatticeVector(n, gamma), LatticeVector::zeros(n), 0.0};
  const auto set = extract(v, d);
  for (std::size_t s = 1; s < gamma.size(); ++s) {
    EXPECT_NEAR(set.i_or[static_cast<Mask>(s)], s == t ? 3.0 : 0.0, 1e-12);
    EXPECT_NEAR(set.i_and[static_cast<Mask>(s)], 0.0, 1e-12);
  }
}

TEST(Extract, ConstantTable) {
  const ValueTable v{LatticeVector::constant(5, 2.5), "", ""};
  const auto set = extract(v, Decomposition::all_and(v));
  EXPECT_EQ(set.bias, 2.5);
  EXPECT_EQ(set.l1(), 0.0);
  // Halving a constant puts a step on both sides; sparsify removes it.
  EXPECT_GT(extract(v, Decomposition::even_split(v)).l1(), 0.0);
  SparsifyConfig cfg;
  cfg.denoise = false;
  EXPECT_LE(sparsify(v, cfg).interactions.l1(), 1e-6);
}

TEST(Extract, EfficiencyInAllAndMode) {
  const auto v = test::random_table(8, 7);
  const auto set = extract(v, Decomposition::all_and(v));
  EXPECT_NEAR(set.bias + set.full_gap(), v.full_output(), 1e-9);
}

TEST(Extract, UniversalMatchingForArbitraryDecompositions) {
  for (int n = 1; n <= 12; ++n) {
    const auto v = test::random_table(n, 300 + n);
    std::vector<double> gamma = as_vector(test::random_lattice(n, 400 + n, 20.0));
    std::vector<double> delta = as_vector(test::random_lattice(n, 500 + n, 0.3));
    gamma[0] = 0.5 * v.empty_output();
    delta[0] = 0.0;
    const Decomposition d{LatticeVector(n, gamma), LatticeVector(n, delta), 0.3};
    EXPECT_LE(oracle::verify_matching(v, d, extract(v, d)), tolerance_for(v)) << n;
  }
}

TEST(Salience, ThresholdExamples) {
  std::vector<double> a(4, 0.0), b(4, 0.0);
  a[3] = 10.0;
  b[3] = 30.0;
  const std::vector<ValueTable> one{{LatticeVector(2, a), "", ""}};
  EXPECT_DOUBLE_EQ(salience_threshold(std::span<const ValueTable>(one)), 0.2);
  const std::vector<ValueTable> two{{LatticeVector(2, a), "", ""}, {LatticeVector(2, b), "", ""}};
  EXPECT_DOUBLE_EQ(salience_threshold(std::span<const ValueTable>(two)), 0.4);
  const std::vector<ValueTable> flat{{LatticeVector::constant(3, 4.0), "", ""}};
  EXPECT_EQ(salience_threshold(std::span<const ValueTable>(flat)), 0.0);
  EXPECT_THROW(salience_threshold(std::span<const ValueTable>()), ArgumentError);
}

TEST(Salience, FilterIsStrict) {
  const ValueTable v{lattice({0, 1, 2, 5}), "", ""};
  const auto set = extract(v, Decomposition::all_and(v));
  EXPECT_EQ(filter_salient(set, 0.0).count(), 3u);
  EXPECT_EQ(filter_salient(set, 2.0).count(), 0u);
  EXPECT_EQ(filter_salient(set, 1.5).count(EffectKind::kAnd, 2), 1u);
  EXPECT_EQ(filter_salient(set, std::numeric_limits<double>::infinity()).count(), 0u);
  EXPECT_THROW(filter_salient(set, -1.0), ArgumentError);
}

SparsifyConfig quick(bool denoise, long iters = 3000) {
  SparsifyConfig c;
  c.denoise = denoise;
  c.max_iters = iters;
  return c;
}

TEST(Sparsify, ZeroIterationsReturnsEvenSplit) {
  const auto v = test::random_table(5, 8);
  const auto r = sparsify(v, quick(true, 0));
  const auto even = extract(v, Decomposition::even_split(v));
  EXPECT_EQ(r.loss_history.size(), 1u);
  EXPECT_EQ(r.loss_history[0], even.l1());
  EXPECT_EQ(as_vector(r.interactions.i_and), as_vector(even.i_and));
  EXPECT_EQ(r.iterations, 0);
}

TEST(Sparsify, LossNeverIncreasesAndBeatsClosedForms) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto v = test::random_table(6, 600 + seed);
    for (bool denoise : {false, true}) {
      const auto r = sparsify(v, quick(denoise));
      for (std::size_t i = 1; i < r.loss_history.size(); ++i) {
        EXPECT_LE(r.loss_history[i], r.loss_history[i - 1]);
      }
      const double final_loss = r.interactions.l1();
      EXPECT_NEAR(final_loss, r.loss_history.back(), 1e-9 * std::max(1.0, final_loss));
      EXPECT_LE(final_loss, extract(v, Decomposition::all_and(v)).l1() * (1 + 1e-12));
      EXPECT_LE(final_loss, r.loss_history.front());
      r.decomposition.validate(v);
      EXPECT_LE(oracle::verify_matching(v, r.decomposition, r.interactions), tolerance_for(v));
    }
  }
}

TEST(Sparsify, DeltaStaysInBox) {
  const auto v = test::random_table(6, 9);
  const auto r = sparsify(v, quick(true));
  const double zeta = 0.02 * std::abs(v.full_output() - v.empty_output());
  EXPECT_DOUBLE_EQ(r.decomposition.zeta_bound, zeta);
  EXPECT_LE(r.decomposition.delta.max_abs(), zeta * (1 + 1e-12));
}

TEST(Sparsify, PureAndTable) {
  const double c = 6.0;
  const auto v = interaction_function_table(SubsetIndex(0b0111, 6), c, EffectKind::kAnd);
  const auto r = sparsify(v, quick(false));
  EXPECT_LE(r.interactions.l1(), std::abs(c) * (1 + 1e-9));
  EXPECT_NEAR(r.interactions.i_and[0b0111], c, 1e-6);
  const double tau = 0.02 * c;
  const auto salient = filter_salient(r.interactions, tau);
  ASSERT_EQ(salient.count(), 1u);
  EXPECT_EQ(salient.effects[0].mask, 0b0111u);
}

TEST(Sparsify, RecoversSparseGameSupport) {
  SparseGameSpec s;
  s.order_weights = uniform_order_weights(s.n, 2, 4);
  s.seed = 1001;
  const auto g = sample_sparse_game(s);
  const auto v = realize_table(g);
  SparsifyConfig cfg;
  cfg.denoise = false;
  const auto r = sparsify(v, cfg);
  EXPECT_TRUE(r.converged);
  const auto salient = filter_salient(r.interactions, 0.4);
  ASSERT_EQ(salient.count(), g.effect_count());
  for (const auto& e : salient.effects) {
    const auto& truth = g.effects(e.kind);
    ASSERT_TRUE(truth.contains(e.mask));
    EXPECT_NEAR(e.value, truth.at(e.mask), 1e-6);
  }
}

TEST(Sparsify, RejectsBadConfig) {
  const auto v = test::random_table(3, 10);
  SparsifyConfig c;
  c.step_size = 0.0;
  EXPECT_THROW(sparsify(v, c), ArgumentError);
  c = {};
  c.zeta_fraction = -1.0;
  EXPECT_THROW(sparsify(v, c), ArgumentError);
  c = {};
  c.max_iters = -1;
  EXPECT_THROW(sparsify(v, c), ArgumentError);
  EXPECT_THROW(sparsify(test::random_table(21, 1, 1.0)), SizeError);
}

}  // namespace
}  // namespace andor
