#pragma once

// Per-sample order profiles and the Jaccard similarity between mean
// interaction distributions of two sample populations.

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "andor/extraction.hpp"

namespace andor {

// Positive and negative effect strength per order k = 1..n.
struct OrderProfile {
  int n = 0;
  // j_pos[k-1], j_neg[k-1] hold order k.
  std::vector<double> j_pos;
  std::vector<double> j_neg;
  std::size_t salient_count = 0;
  bool source_salient = false;

  double pos(int k) const { return j_pos[k - 1]; }
  double neg(int k) const { return j_neg[k - 1]; }
  // min(J_pos, J_neg): strength that cancels within order k.
  double offset_mass(int k) const { return std::min(pos(k), neg(k)); }
  double total() const;
};

// Over salient effects (|I| > tau) when tau is given, else over all effects.
OrderProfile order_profile(const InteractionSet& set, std::optional<double> tau);
OrderProfile order_profile(const SalientSet& set);

// Strength-weighted mean order; empty when the profile carries no strength.
std::optional<double> average_order(const OrderProfile& p);

struct Slot {
  EffectKind kind;
  Mask mask;
  friend auto operator<=>(const Slot&, const Slot&) = default;
};

// Mean effect per (kind, T) slot over a population. The non-negative vector
// d of the similarity metric is [max(mean, 0); max(-mean, 0)] per slot.
struct InteractionDistribution {
  int n = 0;
  std::map<Slot, double> mean;

  double positive(const Slot& s) const;
  double negative(const Slot& s) const;
};

// Averages raw effects slot by slot; slots absent from a sample count as 0.
InteractionDistribution mean_distribution(std::span<const SalientSet> sets);
InteractionDistribution mean_distribution(std::span<const InteractionSet> sets);

// ||min(d1, d2)||_1 / ||max(d1, d2)||_1, restricted to slots of one order
// when `order` is given. Empty when both sides are zero.
std::optional<double> jaccard(const InteractionDistribution& d1, const InteractionDistribution& d2,
                              std::optional<int> order = std::nullopt);

struct SimilarityReport {
  std::optional<double> sim_global;
  // sim_per_order[k-1] for order k; empty marks an order where both sides
  // are zero.
  std::vector<std::optional<double>> sim_per_order;
};

SimilarityReport per_order_jaccard(std::span<const SalientSet> sets_a,
                                   std::span<const SalientSet> sets_b);
SimilarityReport per_order_jaccard(std::span<const InteractionSet> sets_a,
                                   std::span<const InteractionSet> sets_b, double tau);

}  // namespace andor
