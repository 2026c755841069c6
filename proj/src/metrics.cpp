#include "andor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "andor/errors.hpp"

namespace andor {

double OrderProfile::total() const {
  return std::accumulate(j_pos.begin(), j_pos.end(), 0.0) +
         std::accumulate(j_neg.begin(), j_neg.end(), 0.0);
}

OrderProfile order_profile(const SalientSet& set) {
  OrderProfile p;
  p.n = set.n;
  p.j_pos.assign(set.n, 0.0);
  p.j_neg.assign(set.n, 0.0);
  p.salient_count = set.count();
  p.source_salient = true;
  for (const auto& e : set.effects) {
    const int k = order_of(e.mask);
    if (e.value > 0.0) {
      p.j_pos[k - 1] += e.value;
    } else {
      p.j_neg[k - 1] -= e.value;
    }
  }
  return p;
}

OrderProfile order_profile(const InteractionSet& set, std::optional<double> tau) {
  OrderProfile p = order_profile(filter_salient(set, tau.value_or(0.0)));
  p.source_salient = tau.has_value();
  return p;
}

std::optional<double> average_order(const OrderProfile& p) {
  double weighted = 0.0;
  double total = 0.0;
  for (int k = 1; k <= p.n; ++k) {
    const double strength = p.pos(k) + p.neg(k);
    weighted += k * strength;
    total += strength;
  }
  if (total <= 0.0) return std::nullopt;
  return weighted / total;
}

double InteractionDistribution::positive(const Slot& s) const {
  const auto it = mean.find(s);
  return it == mean.end() ? 0.0 : std::max(it->second, 0.0);
}

double InteractionDistribution::negative(const Slot& s) const {
  const auto it = mean.find(s);
  return it == mean.end() ? 0.0 : std::max(-it->second, 0.0);
}

InteractionDistribution mean_distribution(std::span<const SalientSet> sets) {
  if (sets.empty()) throw ArgumentError("mean distribution of an empty population");
  InteractionDistribution d;
  d.n = sets.front().n;
  for (const auto& s : sets) {
    if (s.n != d.n) {
      throw ArgumentError("population mixes n = " + std::to_string(d.n) + " (" +
                          sets.front().label + ") and n = " + std::to_string(s.n) + " (" +
                          s.label + ")");
    }
    for (const auto& e : s.effects) d.mean[{e.kind, e.mask}] += e.value;
  }
  const double count = static_cast<double>(sets.size());
  for (auto& [slot, value] : d.mean) value /= count;
  return d;
}

InteractionDistribution mean_distribution(std::span<const InteractionSet> sets) {
  std::vector<SalientSet> nonzero;
  nonzero.reserve(sets.size());
  for (const auto& s : sets) nonzero.push_back(filter_salient(s, 0.0));
  return mean_distribution(nonzero);
}

std::optional<double> jaccard(const InteractionDistribution& d1, const InteractionDistribution& d2,
                              std::optional<int> order) {
  if (d1.n != d2.n) throw ArgumentError("distributions over different n");
  double lo = 0.0;
  double hi = 0.0;
  auto accumulate_slot = [&](const Slot& slot) {
    if (order && order_of(slot.mask) != *order) return;
    const double p1 = d1.positive(slot), p2 = d2.positive(slot);
    const double n1 = d1.negative(slot), n2 = d2.negative(slot);
    lo += std::min(p1, p2) + std::min(n1, n2);
    hi += std::max(p1, p2) + std::max(n1, n2);
  };
  for (const auto& [slot, value] : d1.mean) accumulate_slot(slot);
  for (const auto& [slot, value] : d2.mean) {
    if (!d1.mean.contains(slot)) accumulate_slot(slot);
  }
  if (hi <= 0.0) return std::nullopt;
  return lo / hi;
}

SimilarityReport per_order_jaccard(std::span<const SalientSet> sets_a,
                                   std::span<const SalientSet> sets_b) {
  const InteractionDistribution da = mean_distribution(sets_a);
  const InteractionDistribution db = mean_distribution(sets_b);
  if (da.n != db.n) {
    throw ArgumentError("populations disagree on n: " + std::to_string(da.n) + " vs " +
                        std::to_string(db.n));
  }
  SimilarityReport r;
  r.sim_global = jaccard(da, db);
  for (int k = 1; k <= da.n; ++k) r.sim_per_order.push_back(jaccard(da, db, k));
  return r;
}

SimilarityReport per_order_jaccard(std::span<const InteractionSet> sets_a,
                                   std::span<const InteractionSet> sets_b, double tau) {
  std::vector<SalientSet> a, b;
  for (const auto& s : sets_a) a.push_back(filter_salient(s, tau));
  for (const auto& s : sets_b) b.push_back(filter_salient(s, tau));
  return per_order_jaccard(a, b);
}

}  // namespace andor
