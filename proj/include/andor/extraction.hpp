#pragma once

// AND-OR interaction extraction from a value table: the closed form for a
// given decomposition, and the L1 sparsification that learns one.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "andor/lattice.hpp"
#include "andor/models.hpp"

namespace andor {

// v(x_L) - delta_L split into u^and_L = 0.5 (v - delta) + gamma_L and
// u^or_L = 0.5 (v - delta) - gamma_L. The empty set is pinned so that
// u^and_empty = v(x_empty) and u^or_empty = 0.
struct Decomposition {
  LatticeVector gamma;
  LatticeVector delta;
  double zeta_bound = 0.0;

  // Everything to AND: u^and = v - delta, u^or = 0.
  static Decomposition all_and(const ValueTable& v);
  // gamma = 0 off the empty set: u^and = u^or on L != empty.
  static Decomposition even_split(const ValueTable& v);
  // Decomposition whose extraction reproduces the game's own effects.
  static Decomposition from_game(const GroundTruthGame& game, const ValueTable& v);

  // Throws InvariantError when the box or the empty-set pins are violated.
  void validate(const ValueTable& v) const;
};

struct ComponentSplit {
  LatticeVector u_and;
  LatticeVector u_or;
};

ComponentSplit split_components(const ValueTable& v, const Decomposition& d);

// I^and_T and I^or_T for every T, with b = v(x_empty). Both empty-set entries
// are zero; the bias carries that term.
struct InteractionSet {
  LatticeVector i_and;
  LatticeVector i_or;
  double bias = 0.0;
  std::string label;

  int n() const { return i_and.n(); }
  const LatticeVector& effects(EffectKind kind) const {
    return kind == EffectKind::kAnd ? i_and : i_or;
  }
  // sum_T |I^and_T| + |I^or_T|.
  double l1() const;
  // h(x_N) - b: the reconstructed gap v(x_N) - v(x_empty) (minus delta_N).
  double full_gap() const;
};

InteractionSet extract(const ValueTable& v, const Decomposition& d);

struct SparsifyConfig {
  // Primal-dual iterations; 0 returns the even-split initialization.
  long max_iters = 30000;
  // Initial primal/dual step ratio of the preconditioned primal-dual
  // iteration; it is re-balanced at every restart.
  double step_size = 3.0;
  // Stop once the relative duality gap drops below this.
  double convergence_eps = 1e-7;
  double zeta_fraction = config::kZetaFraction;
  // Reserved for randomized restarts; the current solver is deterministic.
  std::uint64_t rng_seed = 0;
  bool denoise = true;
  // Iterations between objective evaluations (each appends to the history).
  long check_interval = 250;
};

struct SparsifyResult {
  Decomposition decomposition;
  InteractionSet interactions;
  // Best L1 loss found so far at the start and at every checkpoint. Among
  // candidates equal in loss up to 1e-9 relative, the one with fewer nonzero
  // effects is kept.
  std::vector<double> loss_history;
  long iterations = 0;
  bool converged = false;
};

SparsifyResult sparsify(const ValueTable& v, const SparsifyConfig& cfg = {});

// tau = fraction * mean over samples of |v(x_N) - v(x_empty)|.
double salience_threshold(std::span<const ValueTable> tables,
                          double fraction = config::kSalienceFraction);
double salience_threshold(std::span<const InteractionSet> sets,
                          double fraction = config::kSalienceFraction);

struct Effect {
  EffectKind kind;
  Mask mask;
  double value;
};

// Effects with |value| > tau, in (kind, mask) order.
struct SalientSet {
  int n = 0;
  double bias = 0.0;
  double tau = 0.0;
  std::string label;
  std::vector<Effect> effects;

  std::size_t count() const { return effects.size(); }
  std::size_t count(EffectKind kind, int order) const;
};

SalientSet filter_salient(const InteractionSet& set, double tau);

}  // namespace andor
