#pragma once

// Sample-level flags, model-to-model comparison, sparsity diagnostics on a
// value table, and the randomized AND-interaction axiom suite.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "andor/extraction.hpp"
#include "andor/metrics.hpp"

namespace andor {

struct SampleReport {
  std::string label;
  std::optional<double> eta_avg;
  std::size_t salient_count = 0;
  // L1 norm of every extracted effect, salient or not.
  double total_l1 = 0.0;
  OrderProfile profile;
  bool confusing = false;
};

// n / 2.
double default_confusion_threshold(int n);

// Profile over effects with |I| > tau; confusing iff eta_avg >= theta.
// theta must lie in [1, n].
SampleReport sample_report(const InteractionSet& set, double tau, double theta);

struct ComparisonPoint {
  std::string label;
  std::optional<double> eta_a;
  std::optional<double> eta_b;
};

struct PairComparison {
  // One point per label present in both inputs, sorted by label.
  std::vector<ComparisonPoint> points;
  // Spearman correlation with average ranks, over points where both etas are
  // defined. Empty when fewer than two such points, or when one side has no
  // rank variance and the rankings differ.
  std::optional<double> rank_correlation;
  // Mean |eta_a - eta_b| over the same points; empty when there are none.
  std::optional<double> mean_abs_diagonal_gap;
  // Jaccard of the two confusing-label sets among shared labels; 1 when both
  // are empty.
  double overlap = 1.0;
};

// Throws ArgumentError on duplicate labels or when no label is shared.
PairComparison compare_models(std::span<const SampleReport> reports_a,
                              std::span<const SampleReport> reports_b);

struct SparsityDiagnostic {
  int max_order_bound = 0;
  // Highest salient order, 0 when nothing is salient.
  int max_salient_order = 0;
  bool condition1_ok = true;

  // mean_confidence[k] = mean over |S| = k of v(x_S) - v(x_empty), k = 0..n.
  std::vector<double> mean_confidence;
  bool condition2_ok = true;
  // Smallest k with mean_confidence[k] < mean_confidence[k - 1].
  std::optional<int> condition2_violation;

  // Smallest p in (0, 64] satisfying the polynomial bound, to 1e-6; empty
  // when no p in that range works.
  std::optional<double> condition3_min_p;
  bool condition3_infeasible = false;

  std::size_t salient_count = 0;
  // log(salient_count * tau) / log(n); empty when nothing is salient.
  std::optional<double> kappa_fit;
};

// max_order must lie in [0, n]. Never throws on a failed condition.
SparsityDiagnostic sparsity_diagnostics(const ValueTable& v, const InteractionSet& set, double tau,
                                        int max_order);

// Smallest p with mean[k'] >= (k'/k)^p mean[k] for all 1 <= k' <= k, by grid
// then bisection. Exposed for tests.
std::optional<double> condition3_min_p(std::span<const double> mean_confidence);

enum class Axiom {
  kEfficiency,
  kLinearity,
  kDummy,
  kSymmetry,
  kAnonymity,
  kRecursive,
  kInteractionDistribution,
};

inline constexpr Axiom kAllAxioms[] = {
    Axiom::kEfficiency, Axiom::kLinearity, Axiom::kDummy,
    Axiom::kSymmetry,   Axiom::kAnonymity, Axiom::kRecursive,
    Axiom::kInteractionDistribution,
};

const char* to_string(Axiom axiom);

struct AxiomCounterexample {
  long trial = 0;
  std::string detail;
  // Tables the failing check ran on.
  std::vector<ValueTable> tables;
};

struct AxiomResult {
  Axiom axiom;
  long trials = 0;
  long failures = 0;
  double max_error = 0.0;
  std::optional<AxiomCounterexample> counterexample;

  bool passed() const { return failures == 0; }
};

struct AxiomSuiteConfig {
  int n = 6;
  long trials = 200;
  std::uint64_t seed = 0;
  double tolerance = config::kAxiomTol;
};

// Checks every axiom on randomized tables built to satisfy its premise.
// Trial t of axiom a draws from its own stream, so results do not depend on
// scheduling. Errors are relative to max(1, largest |v| involved).
std::vector<AxiomResult> axiom_suite(const AxiomSuiteConfig& cfg);

}  // namespace andor
