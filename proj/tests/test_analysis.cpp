#include <gtest/gtest.h>

#include <cmath>

#include "andor/analysis.hpp"
#include "andor/errors.hpp"
#include "test_support.hpp"

namespace andor {
namespace {

InteractionSet make_set(int n, std::vector<std::pair<Mask, double>> ands) {
  std::vector<double> a(table_size(n), 0.0);
  for (auto [m, c] : ands) a[m] = c;
  return {LatticeVector(n, a), LatticeVector::zeros(n), 0.0, ""};
}

SampleReport report(std::string label, std::optional<double> eta, bool confusing) {
  SampleReport r;
  r.label = std::move(label);
  r.eta_avg = eta;
  r.confusing = confusing;
  return r;
}

TEST(SampleReport, ConfusingAtThreshold) {
  const auto set = make_set(4, {{0b0011, 1.0}, {0b1111, 1.0}, {0b0001, 0.01}});
  const auto r = sample_report(set, 0.1, 3.0);
  EXPECT_DOUBLE_EQ(*r.eta_avg, 3.0);
  EXPECT_TRUE(r.confusing);
  EXPECT_EQ(r.salient_count, 2u);
  EXPECT_DOUBLE_EQ(r.total_l1, 2.01);
  EXPECT_FALSE(sample_report(set, 0.1, 3.5).confusing);
}

TEST(SampleReport, NothingSalientIsNotConfusing) {
  const auto r = sample_report(make_set(4, {{1, 0.01}}), 1.0, 1.0);
  EXPECT_FALSE(r.eta_avg.has_value());
  EXPECT_FALSE(r.confusing);
}

TEST(SampleReport, FlagsMonotoneInTheta) {
  std::vector<InteractionSet> sets;
  for (std::uint64_t s = 0; s < 20; ++s) {
    sets.push_back({test::random_lattice(5, s), test::random_lattice(5, s + 100), 0.0, ""});
  }
  for (const auto& set : sets) {
    bool previous = true;
    for (double theta = 1.0; theta <= 5.0; theta += 0.25) {
      const bool flag = sample_report(set, 2.0, theta).confusing;
      EXPECT_TRUE(previous || !flag);
      previous = flag;
    }
  }
}

TEST(SampleReport, ThetaRange) {
  const auto set = make_set(4, {});
  EXPECT_THROW(sample_report(set, 0.0, 0.5), ArgumentError);
  EXPECT_THROW(sample_report(set, 0.0, 4.5), ArgumentError);
  EXPECT_DOUBLE_EQ(default_confusion_threshold(10), 5.0);
}

TEST(CompareModels, IdenticalInputs) {
  const std::vector<SampleReport> a{report("x", 1.0, false), report("y", 3.0, true), report("z", 2.0, false)};
  const auto c = compare_models(a, a);
  EXPECT_EQ(*c.rank_correlation, 1.0);
  EXPECT_EQ(*c.mean_abs_diagonal_gap, 0.0);
  EXPECT_EQ(c.overlap, 1.0);
  ASSERT_EQ(c.points.size(), 3u);
  EXPECT_EQ(c.points[0].label, "x");
}

TEST(CompareModels, ReversedRanksAndOverlap) {
  const std::vector<SampleReport> a{report("a", 1.0, false), report("b", 2.0, true), report("c", 3.0, true)};
  const std::vector<SampleReport> b{report("c", 1.0, true), report("b", 2.0, false), report("a", 3.0, false),
                                    report("d", 9.0, true)};
  const auto c = compare_models(a, b);
  EXPECT_EQ(c.points.size(), 3u);
  EXPECT_DOUBLE_EQ(*c.rank_correlation, -1.0);
  EXPECT_DOUBLE_EQ(*c.mean_abs_diagonal_gap, 4.0 / 3.0);
  // {b, c} vs {c}: d is not shared.
  EXPECT_DOUBLE_EQ(c.overlap, 0.5);
}

TEST(CompareModels, SpearmanWithTies) {
  const std::vector<SampleReport> a{report("a", 1.0, false), report("b", 2.0, false), report("c", 2.0, false),
                                    report("d", 4.0, false)};
  const std::vector<SampleReport> b{report("a", 1.0, false), report("b", 3.0, false), report("c", 2.0, false),
                                    report("d", 4.0, false)};
  // Ranks (1, 2.5, 2.5, 4) against (1, 3, 2, 4).
  const double mx = 2.5, my = 2.5;
  const std::vector<double> rx{1, 2.5, 2.5, 4}, ry{1, 3, 2, 4};
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 4; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  EXPECT_NEAR(*compare_models(a, b).rank_correlation, sxy / std::sqrt(sxx * syy), 1e-12);
}

TEST(CompareModels, UndefinedCorrelation) {
  const std::vector<SampleReport> one{report("a", 1.0, false)};
  EXPECT_FALSE(compare_models(one, one).rank_correlation.has_value());
  const std::vector<SampleReport> a{report("a", 2.0, false), report("b", 2.0, false)};
  const std::vector<SampleReport> b{report("a", 1.0, false), report("b", 3.0, false)};
  EXPECT_FALSE(compare_models(a, b).rank_correlation.has_value());
  const std::vector<SampleReport> na{report("a", std::nullopt, false), report("b", 1.0, false)};
  const auto c = compare_models(na, na);
  EXPECT_FALSE(c.rank_correlation.has_value());
  EXPECT_EQ(*c.mean_abs_diagonal_gap, 0.0);
}

TEST(CompareModels, Errors) {
  const std::vector<SampleReport> dup{report("a", 1.0, false), report("a", 2.0, false)};
  const std::vector<SampleReport> other{report("b", 1.0, false)};
  EXPECT_THROW(compare_models(dup, dup), ArgumentError);
  EXPECT_THROW(compare_models(other, std::vector<SampleReport>{report("c", 1.0, false)}), ArgumentError);
}

TEST(Condition3, LinearGameNeedsOne) {
  const std::vector<double> mean{0, 1, 2, 3, 4, 5};
  EXPECT_NEAR(*condition3_min_p(mean), 1.0, 1e-5);
}

TEST(Condition3, QuadraticNeedsTwo) {
  std::vector<double> mean;
  for (int k = 0; k <= 6; ++k) mean.push_back(k * k);
  EXPECT_NEAR(*condition3_min_p(mean), 2.0, 1e-5);
}

TEST(Condition3, InfeasibleWhenNoPWorks) {
  // mean[1] <= 0 with mean[2] > 0 fails for every p.
  EXPECT_FALSE(condition3_min_p(std::vector<double>{0, -1, 3}).has_value());
  // Growth faster than any power up to 64.
  EXPECT_FALSE(condition3_min_p(std::vector<double>{0, 1e-30, 1}).has_value());
}

TEST(Diagnostics, LinearGame) {
  const int n = 6;
  std::vector<std::pair<Mask, double>> ands;
  for (int i = 0; i < n; ++i) ands.push_back({Mask{1} << i, 2.0});
  std::map<Mask, double> effects(ands.begin(), ands.end());
  const auto v = realize_table(GroundTruthGame(n, effects, {}, 0.0));
  const auto set = extract(v, Decomposition::all_and(v));
  const auto d = sparsity_diagnostics(v, set, 0.24, 1);
  EXPECT_EQ(d.max_salient_order, 1);
  EXPECT_TRUE(d.condition1_ok);
  EXPECT_TRUE(d.condition2_ok);
  for (int k = 0; k <= n; ++k) EXPECT_DOUBLE_EQ(d.mean_confidence[k], 2.0 * k);
  EXPECT_NEAR(*d.condition3_min_p, 1.0, 1e-5);
  EXPECT_EQ(d.salient_count, static_cast<std::size_t>(n));
  EXPECT_NEAR(*d.kappa_fit, std::log(6 * 0.24) / std::log(6.0), 1e-12);
}

TEST(Diagnostics, DetectsViolations) {
  const int n = 4;
  const auto v = realize_table(GroundTruthGame(n, {{0b0011, 5.0}, {0b1111, -9.0}}, {}, 0.0));
  const auto set = extract(v, Decomposition::all_and(v));
  const auto d = sparsity_diagnostics(v, set, 0.1, 2);
  EXPECT_EQ(d.max_salient_order, 4);
  EXPECT_FALSE(d.condition1_ok);
  EXPECT_FALSE(d.condition2_ok);
  EXPECT_EQ(*d.condition2_violation, 4);
  EXPECT_THROW(sparsity_diagnostics(v, set, 0.1, 5), ArgumentError);
}

TEST(Diagnostics, NothingSalient) {
  const ValueTable v{LatticeVector::constant(3, 1.0), "", ""};
  const auto d = sparsity_diagnostics(v, extract(v, Decomposition::all_and(v)), 0.1, 3);
  EXPECT_EQ(d.max_salient_order, 0);
  EXPECT_FALSE(d.kappa_fit.has_value());
}

TEST(AxiomSuite, AllPass) {
  AxiomSuiteConfig cfg;
  cfg.trials = 40;
  cfg.seed = 3;
  const auto results = axiom_suite(cfg);
  ASSERT_EQ(results.size(), std::size(kAllAxioms));
  for (const auto& r : results) {
    EXPECT_TRUE(r.passed()) << to_string(r.axiom) << " " << r.max_error;
    EXPECT_EQ(r.trials, 40);
    EXPECT_FALSE(r.counterexample.has_value());
  }
}

TEST(AxiomSuite, DeterministicAcrossRuns) {
  AxiomSuiteConfig cfg;
  cfg.trials = 10;
  cfg.seed = 8;
  const auto a = axiom_suite(cfg);
  const auto b = axiom_suite(cfg);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].max_error, b[i].max_error);
}

TEST(AxiomSuite, NegativeToleranceFails) {
  AxiomSuiteConfig cfg;
  cfg.trials = 5;
  cfg.tolerance = -1.0;
  const auto results = axiom_suite(cfg);
  EXPECT_FALSE(results[0].passed());
  ASSERT_TRUE(results[0].counterexample.has_value());
  EXPECT_FALSE(results[0].counterexample->tables.empty());
}

}  // namespace
}  // namespace andor
