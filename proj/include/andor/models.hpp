#pragma once

// Value-table sources: synthetic ground-truth games and a small dense
// network evaluated over every masked state of one input.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "andor/lattice.hpp"

namespace andor {

enum class EffectKind { kAnd, kOr };

const char* to_string(EffectKind kind);

// v(x_S) for all 2^n subsets S of one sample. values[0] is the all-masked
// output v(x_empty).
struct ValueTable {
  LatticeVector values;
  std::string label;
  std::string meta;

  int n() const { return values.n(); }
  double empty_output() const { return values[0]; }
  double full_output() const { return values[full_mask(values.n())]; }
};

// Sparse AND/OR effects plus the bias v(x_empty). Neither map holds the
// empty set.
class GroundTruthGame {
 public:
  GroundTruthGame(int n, std::map<Mask, double> and_effects, std::map<Mask, double> or_effects,
                  double bias);

  int n() const { return n_; }
  double bias() const { return bias_; }
  const std::map<Mask, double>& and_effects() const { return and_; }
  const std::map<Mask, double>& or_effects() const { return or_; }
  const std::map<Mask, double>& effects(EffectKind kind) const {
    return kind == EffectKind::kAnd ? and_ : or_;
  }
  std::size_t effect_count() const { return and_.size() + or_.size(); }
  bool uses_subset(Mask t) const { return and_.contains(t) || or_.contains(t); }

  GroundTruthGame with_effect(EffectKind kind, Mask t, double value) const;

 private:
  int n_;
  std::map<Mask, double> and_;
  std::map<Mask, double> or_;
  double bias_;
};

// v_T(x_S) = c when T subset S (kind AND) or T cap S != 0 (kind OR), else 0.
ValueTable interaction_function_table(const SubsetIndex& t, double c, EffectKind kind);

struct SparseGameSpec {
  int n = 10;
  std::size_t effect_count = 15;
  // order_weights[k-1] is the probability of drawing an order-k effect.
  std::vector<double> order_weights;
  double effect_range = 10.0;
  // Drawn magnitudes are uniform in [magnitude_floor, effect_range].
  double magnitude_floor = 6.0;
  // Probability that an effect of order >= 2 is an OR effect. Order-1 AND
  // and OR effects are the same function, so singletons are always AND.
  double or_probability = 0.5;
  double bias_range = 1.0;
  std::uint64_t seed = 0;
};

// Weights putting equal mass on orders lo..hi (1-based, inclusive).
std::vector<double> uniform_order_weights(int n, int lo, int hi);

// Draws spec.effect_count effects on distinct subsets; no subset carries both
// an AND and an OR effect. Deterministic in spec.seed.
GroundTruthGame sample_sparse_game(const SparseGameSpec& spec);

// v(x_S) = bias + sum_{0 != T subset S} I^and_T + sum_{T cap S != 0} I^or_T.
ValueTable realize_table(const GroundTruthGame& game, std::string label = {});

struct OverfitSpec {
  int min_order = 7;
  std::size_t pair_count = 10;
  double magnitude = 10.0;
  double or_probability = 0.5;
  std::uint64_t seed = 0;
};

// Adds pair_count (+magnitude, -magnitude) effect pairs on distinct unused
// subsets of order >= min_order.
GroundTruthGame inject_overfit(const GroundTruthGame& game, const OverfitSpec& spec);

// Dense layers with rectified-linear hidden activations and a class-score
// output head.
class TinyNet {
 public:
  struct Layer {
    // Row-major, outputs x inputs.
    std::vector<double> weights;
    std::vector<double> bias;
    int inputs = 0;
    int outputs = 0;
  };

  explicit TinyNet(std::vector<Layer> layers);

  // widths = {input, hidden..., classes}; uniform weights in
  // +-sqrt(3 / fan_in), small uniform biases.
  static TinyNet random(std::span<const int> widths, std::uint64_t seed);

  int input_width() const { return layers_.front().inputs; }
  int class_count() const { return layers_.back().outputs; }
  const std::vector<Layer>& layers() const { return layers_; }

  std::vector<double> scores(std::span<const double> x) const;

  // log(p / (1 - p)) of the softmax probability of class_index, with p
  // clipped to [kLogitClamp, 1 - kLogitClamp].
  double confidence(std::span<const double> x, int class_index) const;

 private:
  std::vector<Layer> layers_;
};

struct MaskingScheme {
  std::vector<double> sample;
  std::vector<double> baseline;

  // Keeps sample values on S and baseline values elsewhere.
  std::vector<double> masked(Mask s) const;
};

// Per-variable mean over samples.
std::vector<double> mean_baseline(std::span<const std::vector<double>> samples);

ValueTable net_value_table(const TinyNet& net, const MaskingScheme& scheme, int class_index,
                           std::string label = {});

}  // namespace andor
