#include "andor/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "andor/errors.hpp"
#include "andor/oracle.hpp"
#include "andor/random.hpp"

namespace andor {

double default_confusion_threshold(int n) { return 0.5 * n; }

SampleReport sample_report(const InteractionSet& set, double tau, double theta) {
  const int n = set.n();
  if (!(theta >= 1.0 && theta <= n)) {
    throw ArgumentError("confusion threshold " + std::to_string(theta) + " outside [1, " +
                        std::to_string(n) + "]");
  }
  SampleReport r;
  r.label = set.label;
  r.profile = order_profile(set, tau);
  r.eta_avg = average_order(r.profile);
  r.salient_count = r.profile.salient_count;
  r.total_l1 = set.l1();
  r.confusing = r.eta_avg.has_value() && *r.eta_avg >= theta;
  return r;
}

namespace {

std::map<std::string, const SampleReport*> index_by_label(std::span<const SampleReport> reports,
                                                          const char* side) {
  std::map<std::string, const SampleReport*> out;
  for (const auto& r : reports) {
    if (!out.emplace(r.label, &r).second) {
      throw ArgumentError(std::string("duplicate label '") + r.label + "' in " + side);
    }
  }
  return out;
}

// Ranks 1..m with ties sharing the mean of the positions they span.
std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2) return std::nullopt;
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  if (ra == rb) return 1.0;
  const double mean = 0.5 * static_cast<double>(a.size() + 1);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - mean) * (rb[i] - mean);
    va += (ra[i] - mean) * (ra[i] - mean);
    vb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (va == 0.0 || vb == 0.0) return std::nullopt;
  return std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0);
}

}  // namespace

PairComparison compare_models(std::span<const SampleReport> reports_a,
                              std::span<const SampleReport> reports_b) {
  const auto a = index_by_label(reports_a, "first input");
  const auto b = index_by_label(reports_b, "second input");
  PairComparison out;
  std::vector<double> eta_a, eta_b;
  std::size_t both = 0, either = 0;
  double gap = 0.0;
  for (const auto& [label, ra] : a) {
    const auto it = b.find(label);
    if (it == b.end()) continue;
    const SampleReport* rb = it->second;
    out.points.push_back({label, ra->eta_avg, rb->eta_avg});
    if (ra->eta_avg && rb->eta_avg) {
      eta_a.push_back(*ra->eta_avg);
      eta_b.push_back(*rb->eta_avg);
      gap += std::abs(*ra->eta_avg - *rb->eta_avg);
    }
    both += ra->confusing && rb->confusing;
    either += ra->confusing || rb->confusing;
  }
  if (out.points.empty()) throw ArgumentError("the two report sets share no sample label");
  out.rank_correlation = spearman(eta_a, eta_b);
  if (!eta_a.empty()) out.mean_abs_diagonal_gap = gap / static_cast<double>(eta_a.size());
  out.overlap = either == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(either);
  return out;
}

std::optional<double> condition3_min_p(std::span<const double> mean) {
  const int n = static_cast<int>(mean.size()) - 1;
  auto holds = [&](double p) {
    for (int k = 1; k <= n; ++k) {
      for (int kp = 1; kp < k; ++kp) {
        if (mean[kp] < std::pow(static_cast<double>(kp) / k, p) * mean[k]) return false;
      }
    }
    return true;
  };
  constexpr int kGrid = 4096;
  const double top = config::kCondition3MaxP;
  double lo = 0.0;
  for (int g = 1; g <= kGrid; ++g) {
    const double p = top * g / kGrid;
    if (holds(p)) {
      double hi = p;
      while (hi - lo > config::kCondition3Resolution) {
        const double mid = 0.5 * (lo + hi);
        if (holds(mid)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      return hi;
    }
    lo = p;
  }
  return std::nullopt;
}

SparsityDiagnostic sparsity_diagnostics(const ValueTable& v, const InteractionSet& set, double tau,
                                        int max_order) {
  const int n = v.n();
  if (set.n() != n) throw SizeError("interaction set and table disagree on n");
  if (max_order < 0 || max_order > n) {
    throw ArgumentError("max order " + std::to_string(max_order) + " outside [0, " +
                        std::to_string(n) + "]");
  }
  SparsityDiagnostic d;
  d.max_order_bound = max_order;

  const SalientSet salient = filter_salient(set, tau);
  d.salient_count = salient.count();
  for (const auto& e : salient.effects) d.max_salient_order = std::max(d.max_salient_order, order_of(e.mask));
  d.condition1_ok = d.max_salient_order <= max_order;

  std::vector<double> sum(n + 1, 0.0);
  std::vector<double> count(n + 1, 0.0);
  const double v0 = v.empty_output();
  for (std::size_t s = 0; s < table_size(n); ++s) {
    const int k = order_of(static_cast<Mask>(s));
    sum[k] += v.values[static_cast<Mask>(s)] - v0;
    count[k] += 1.0;
  }
  d.mean_confidence.resize(n + 1);
  for (int k = 0; k <= n; ++k) d.mean_confidence[k] = sum[k] / count[k];
  for (int k = 1; k <= n; ++k) {
    if (d.mean_confidence[k] < d.mean_confidence[k - 1]) {
      d.condition2_ok = false;
      d.condition2_violation = k;
      break;
    }
  }

  // A non-positive mean followed by a positive one can never be bounded.
  for (int kp = 1; kp <= n && !d.condition3_infeasible; ++kp) {
    if (d.mean_confidence[kp] > 0.0) continue;
    for (int k = kp + 1; k <= n; ++k) {
      if (d.mean_confidence[k] > 0.0) {
        d.condition3_infeasible = true;
        break;
      }
    }
  }
  if (!d.condition3_infeasible) {
    d.condition3_min_p = condition3_min_p(d.mean_confidence);
    d.condition3_infeasible = !d.condition3_min_p.has_value();
  }

  if (d.salient_count > 0 && n > 1) {
    d.kappa_fit = std::log(static_cast<double>(d.salient_count) * tau) / std::log(static_cast<double>(n));
  }
  return d;
}

const char* to_string(Axiom axiom) {
  switch (axiom) {
    case Axiom::kEfficiency: return "efficiency";
    case Axiom::kLinearity: return "linearity";
    case Axiom::kDummy: return "dummy";
    case Axiom::kSymmetry: return "symmetry";
    case Axiom::kAnonymity: return "anonymity";
    case Axiom::kRecursive: return "recursive";
    case Axiom::kInteractionDistribution: return "interaction-distribution";
  }
  return "unknown";
}

namespace {

struct TrialOutcome {
  double error = 0.0;
  std::string detail;
  std::vector<ValueTable> tables;
};

constexpr double kValueRange = 5.0;

ValueTable random_table(Rng& rng, int n, std::string label) {
  std::vector<double> values(table_size(n));
  for (double& x : values) x = rng.uniform(-kValueRange, kValueRange);
  return {LatticeVector(n, std::move(values)), std::move(label), {}};
}

// All-AND extraction with the bias written back into the empty-set entry.
std::vector<double> and_effects(const ValueTable& v) {
  const InteractionSet set = extract(v, Decomposition::all_and(v));
  std::vector<double> out(set.i_and.values().begin(), set.i_and.values().end());
  out[0] = set.bias;
  return out;
}

double scale_of(const ValueTable& v) { return std::max(1.0, v.values.max_abs()); }

int random_variable(Rng& rng, int n) { return static_cast<int>(rng.below(static_cast<std::uint64_t>(n))); }

TrialOutcome efficiency(Rng& rng, int n) {
  ValueTable v = random_table(rng, n, "v");
  const auto effects = and_effects(v);
  const double sum = std::accumulate(effects.begin(), effects.end(), 0.0);
  const double err = std::abs(sum - v.full_output()) / scale_of(v);
  return {err, "sum of effects " + std::to_string(sum) + " vs v(x_N) " + std::to_string(v.full_output()), {v}};
}

TrialOutcome linearity(Rng& rng, int n) {
  ValueTable v1 = random_table(rng, n, "v1");
  ValueTable v2 = random_table(rng, n, "v2");
  ValueTable v{v1.values + v2.values, "v1+v2", {}};
  const auto e = and_effects(v), e1 = and_effects(v1), e2 = and_effects(v2);
  double err = 0.0;
  Mask worst = 0;
  for (std::size_t t = 0; t < e.size(); ++t) {
    const double d = std::abs(e[t] - e1[t] - e2[t]);
    if (d > err) {
      err = d;
      worst = static_cast<Mask>(t);
    }
  }
  const double scale = std::max(scale_of(v1), scale_of(v2));
  return {err / scale, "largest deviation at mask " + std::to_string(worst), {v1, v2}};
}

TrialOutcome dummy(Rng& rng, int n) {
  const int i = random_variable(rng, n);
  const Mask bit = Mask{1} << i;
  const double alone = rng.uniform(-kValueRange, kValueRange);
  std::vector<double> values(table_size(n), 0.0);
  for (std::size_t s = 1; s < values.size(); ++s) {
    if (!(s & bit)) values[s] = rng.uniform(-kValueRange, kValueRange);
  }
  for (std::size_t s = 0; s < values.size(); ++s) {
    if (s & bit) values[s] = values[s & ~bit] + alone;
  }
  ValueTable v{LatticeVector(n, std::move(values)), "dummy variable " + std::to_string(i + 1), {}};
  const auto e = and_effects(v);
  double err = 0.0;
  Mask worst = 0;
  for (std::size_t t = 0; t < e.size(); ++t) {
    if (!(t & bit) || t == bit) continue;
    if (std::abs(e[t]) > err) {
      err = std::abs(e[t]);
      worst = static_cast<Mask>(t);
    }
  }
  return {err / scale_of(v), "variable " + std::to_string(i + 1) + " interacts at mask " + std::to_string(worst), {v}};
}

TrialOutcome symmetry(Rng& rng, int n) {
  const int i = random_variable(rng, n);
  int j = random_variable(rng, n - 1);
  if (j >= i) ++j;
  const Mask bi = Mask{1} << i, bj = Mask{1} << j;
  ValueTable base = random_table(rng, n, "");
  std::vector<double> values(base.values.values().begin(), base.values.values().end());
  for (std::size_t s = 0; s < values.size(); ++s) {
    if (s & (bi | bj)) continue;
    values[s | bj] = values[s | bi];
  }
  ValueTable v{LatticeVector(n, std::move(values)),
               "symmetric variables " + std::to_string(i + 1) + ", " + std::to_string(j + 1), {}};
  const auto e = and_effects(v);
  double err = 0.0;
  Mask worst = 0;
  for (std::size_t t = 0; t < e.size(); ++t) {
    if (t & (bi | bj)) continue;
    const double d = std::abs(e[t | bi] - e[t | bj]);
    if (d > err) {
      err = d;
      worst = static_cast<Mask>(t);
    }
  }
  return {err / scale_of(v), "asymmetric at context mask " + std::to_string(worst), {v}};
}

TrialOutcome anonymity(Rng& rng, int n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int k = n - 1; k > 0; --k) std::swap(perm[k], perm[rng.below(static_cast<std::uint64_t>(k) + 1)]);
  ValueTable v = random_table(rng, n, "v");
  ValueTable pv{permute_variables(v.values, perm), "permuted", {}};
  const auto e = and_effects(v), pe = and_effects(pv);
  double err = 0.0;
  Mask worst = 0;
  for (std::size_t t = 0; t < e.size(); ++t) {
    const double d = std::abs(e[t] - pe[permute_mask(static_cast<Mask>(t), perm)]);
    if (d > err) {
      err = d;
      worst = static_cast<Mask>(t);
    }
  }
  std::string p;
  for (int x : perm) p += (p.empty() ? "" : " ") + std::to_string(x + 1);
  return {err / scale_of(v), "permutation [" + p + "] moves mask " + std::to_string(worst), {v, pv}};
}

TrialOutcome recursive(Rng& rng, int n) {
  const int i = random_variable(rng, n);
  const Mask bit = Mask{1} << i;
  ValueTable v = random_table(rng, n, "v");
  const auto e = and_effects(v);
  double err = 0.0;
  Mask worst = 0;
  for (std::size_t t = 0; t < e.size(); ++t) {
    if (t & bit) continue;
    const double present = oracle::conditioned_and(v, static_cast<Mask>(t), i + 1);
    const double d = std::abs(e[t | bit] - (present - e[t]));
    if (d > err) {
      err = d;
      worst = static_cast<Mask>(t);
    }
  }
  return {err / scale_of(v),
          "variable " + std::to_string(i + 1) + " breaks the recursion at mask " + std::to_string(worst), {v}};
}

TrialOutcome interaction_distribution(Rng& rng, int n) {
  const Mask t = static_cast<Mask>(1 + rng.below(table_size(n) - 1));
  const double c = rng.sign() * rng.uniform(0.5, kValueRange);
  ValueTable v = interaction_function_table(SubsetIndex(t, n), c, EffectKind::kAnd);
  v.label = "interaction function at mask " + std::to_string(t);
  const auto e = and_effects(v);
  double err = 0.0;
  Mask worst = 0;
  for (std::size_t s = 0; s < e.size(); ++s) {
    const double d = std::abs(e[s] - (s == t ? c : 0.0));
    if (d > err) {
      err = d;
      worst = static_cast<Mask>(s);
    }
  }
  return {err / scale_of(v), "effect off by " + std::to_string(err) + " at mask " + std::to_string(worst), {v}};
}

TrialOutcome run_trial(Axiom axiom, Rng& rng, int n) {
  switch (axiom) {
    case Axiom::kEfficiency: return efficiency(rng, n);
    case Axiom::kLinearity: return linearity(rng, n);
    case Axiom::kDummy: return dummy(rng, n);
    case Axiom::kSymmetry: return symmetry(rng, n);
    case Axiom::kAnonymity: return anonymity(rng, n);
    case Axiom::kRecursive: return recursive(rng, n);
    case Axiom::kInteractionDistribution: return interaction_distribution(rng, n);
  }
  return {};
}

}  // namespace

std::vector<AxiomResult> axiom_suite(const AxiomSuiteConfig& cfg) {
  check_variable_count(cfg.n, config::kMaxAxiomVariables);
  if (cfg.n < 2) throw ArgumentError("axiom suite needs n >= 2");
  if (cfg.trials < 1) throw ArgumentError("axiom suite needs at least one trial");
  std::vector<AxiomResult> results;
  std::uint64_t axiom_index = 0;
  for (Axiom axiom : kAllAxioms) {
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
#pragma omp parallel for schedule(static)
    for (long trial = 0; trial < cfg.trials; ++trial) {
      Rng rng = Rng::derive(cfg.seed, (axiom_index << 32) | static_cast<std::uint64_t>(trial));
      outcomes[static_cast<std::size_t>(trial)] = run_trial(axiom, rng, cfg.n);
    }
    AxiomResult r{axiom, cfg.trials, 0, 0.0, std::nullopt};
    for (long trial = 0; trial < cfg.trials; ++trial) {
      auto& o = outcomes[static_cast<std::size_t>(trial)];
      r.max_error = std::max(r.max_error, o.error);
      if (!(o.error <= cfg.tolerance)) {
        ++r.failures;
        if (!r.counterexample) r.counterexample = AxiomCounterexample{trial, o.detail, std::move(o.tables)};
      }
    }
    results.push_back(std::move(r));
    ++axiom_index;
  }
  return results;
}

}  // namespace andor
