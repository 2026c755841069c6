#pragma once

// JSON documents for tables, interaction sets, decompositions and
// ground-truth sidecars, plus the CSV report writers. Numbers are written in
// the shortest decimal form that reads back to the same double.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "andor/analysis.hpp"
#include "andor/extraction.hpp"
#include "andor/metrics.hpp"
#include "andor/models.hpp"
#include "andor/population.hpp"

namespace andor::io {

// Fixed notation, no exponent, locale independent.
std::string format_number(double x);
// "NA" when empty.
std::string format_number(const std::optional<double>& x);

std::string read_text(const std::filesystem::path& path);
// Creates parent directories. Throws IoError on failure.
void write_text(const std::filesystem::path& path, std::string_view content);

// Regular files in `dir` whose names end in `suffix`, sorted by name.
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              std::string_view suffix);

// {"n", "label", "values", "meta"}; values indexed by bitmask.
std::string serialize(const ValueTable& table);
ValueTable parse_value_table(std::string_view text, const std::string& source);
ValueTable read_value_table(const std::filesystem::path& path);

struct StoredInteractions {
  InteractionSet set;
  std::optional<double> tau;
};

// {"n", "label", "bias", "tau", "and": [{"mask", "value"}...], "or": [...]},
// listing every nonzero effect.
std::string serialize(const InteractionSet& set, std::optional<double> tau);
StoredInteractions parse_interactions(std::string_view text, const std::string& source);
StoredInteractions read_interactions(const std::filesystem::path& path);

// {"n", "zeta_bound", "gamma", "delta"}.
std::string serialize(const Decomposition& d);
Decomposition parse_decomposition(std::string_view text, const std::string& source);
Decomposition read_decomposition(const std::filesystem::path& path);

struct TruthRecord {
  std::string label;
  GroundTruthGame game;
  bool injected = false;
};

// {"samples": [{"label", "n", "bias", "injected", "and", "or"}...]}.
std::string serialize_truth(std::span<const TruthRecord> records);
std::vector<TruthRecord> parse_truth(std::string_view text, const std::string& source);

// sample_label,k,j_pos,j_neg,offset_mass
std::string profile_csv(std::span<const SampleReport> reports);
// sample_label,eta_avg,salient_count,total_l1,confusing
std::string samples_csv(std::span<const SampleReport> reports);
// k,sim with a leading "all" row
std::string similarity_csv(const SimilarityReport& report);
// sample_label,checkpoint,loss
std::string loss_csv(std::span<const std::pair<std::string, std::vector<double>>> histories);
// sample_label,eta_a,eta_b
std::string comparison_points_csv(const PairComparison& c);
// key: value lines
std::string comparison_summary(const PairComparison& c);
std::string diagnostic_report(const std::string& label, const SparsityDiagnostic& d);
std::string axiom_report(const AxiomSuiteConfig& cfg, std::span<const AxiomResult> results);

}  // namespace andor::io
