#pragma once

// Seeded batches of value tables: plain sparse games, games with injected
// high-order offsetting pairs, train/test populations that share only their
// low-order effects, and a small network evaluated on random inputs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "andor/models.hpp"

namespace andor {

struct PopulationSample {
  ValueTable table;
  // Empty for network-derived tables.
  std::optional<GroundTruthGame> game;
  bool injected = false;
};

// Labels are "<prefix>_000", "<prefix>_001", ...
std::string sample_label(const std::string& prefix, std::size_t index);

struct GamePopulationSpec {
  std::size_t samples = 50;
  // Seed is replaced per sample by a stream derived from `seed`.
  SparseGameSpec game;
  std::uint64_t seed = 0;
  std::string prefix = "sample";
};

std::vector<PopulationSample> game_population(const GamePopulationSpec& spec);

struct ConfusingPopulationSpec {
  GamePopulationSpec base;
  // round(fraction * samples) samples, chosen uniformly, receive pairs.
  double overfit_fraction = 0.2;
  OverfitSpec overfit;
};

std::vector<PopulationSample> confusing_population(const ConfusingPopulationSpec& spec);

struct GeneralizationSpec {
  int n = 10;
  std::size_t samples = 40;
  // Effects on orders 1..shared_max_order, identical across both populations.
  std::size_t shared_effects = 8;
  int shared_max_order = 2;
  // Effects on orders high_min_order..high_max_order (0 means n), drawn
  // separately for each population.
  std::size_t high_effects = 8;
  int high_min_order = 5;
  int high_max_order = 0;
  double effect_range = 10.0;
  double magnitude_floor = 6.0;
  std::uint64_t seed = 0;
};

struct GeneralizationPair {
  std::vector<PopulationSample> train;
  std::vector<PopulationSample> test;
};

// Sample i of "train" and of "test" carry the same low-order effects and
// independently drawn high-order ones.
GeneralizationPair generalization_pair(const GeneralizationSpec& spec);

struct NetPopulationSpec {
  int n = 10;
  std::size_t samples = 20;
  std::vector<int> hidden = {16};
  int classes = 2;
  std::uint64_t seed = 0;
  std::string prefix = "net";
};

// Inputs are standard-uniform vectors; the baseline is their mean; each table
// is the confidence of the class the full input scores highest.
std::vector<PopulationSample> net_population(const NetPopulationSpec& spec);

}  // namespace andor
