#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace andor::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kUsageOrIo = 2;

struct SynthOptions {
  std::string out;
  std::uint64_t seed = 0;
  std::size_t samples = 10;
  std::vector<std::string> game;  // key=value tokens
  double overfit_fraction = 0.0;
  int overfit_min_order = 7;
  std::size_t overfit_pairs = 10;
  double overfit_magnitude = 10.0;
  std::string interaction;  // "and" | "or"
  std::string mask;
  double c = 1.0;
  int n = 10;
  bool net = false;
  std::vector<int> hidden = {16};
  int classes = 2;
  bool generalization = false;
};

struct ExtractOptions {
  std::string in;
  std::string out;
  std::string mode = "sparsify";  // sparsify | all-and | even-split | truth
  std::string truth;
  bool no_denoise = false;
  double zeta_fraction = 0.02;
  double tau_fraction = 0.02;
  std::optional<double> tau_absolute;
  long max_iters = 30000;
  double step = 3.0;
  double eps = 1e-7;
  long check_interval = 250;
};

struct ProfileOptions {
  std::string in;
  std::string out;
  std::optional<double> theta;
  std::optional<double> tau_absolute;
};

struct SimilarityOptions {
  std::string train;
  std::string test;
  std::string out;
  std::optional<double> tau_absolute;
};

struct CompareOptions {
  std::string a;
  std::string b;
  std::string out;
  std::optional<double> theta;
  std::optional<double> tau_absolute;
};

struct DiagnoseOptions {
  std::string tables;
  std::string interactions;
  std::string out;
  std::optional<int> max_order;
  std::optional<double> tau_absolute;
};

struct AxiomsOptions {
  int n = 6;
  long trials = 200;
  std::uint64_t seed = 0;
  std::string out;
};

struct OracleVerifyOptions {
  std::string table;
  std::string decomposition;
  std::string interactions;
};

struct OracleBruteOptions {
  std::string table;
  std::string kind = "and";
  std::string out;
};

int run_synth(const SynthOptions& o);
int run_extract(const ExtractOptions& o);
int run_profile(const ProfileOptions& o);
int run_similarity(const SimilarityOptions& o);
int run_compare(const CompareOptions& o);
int run_diagnose(const DiagnoseOptions& o);
int run_axioms(const AxiomsOptions& o);
int run_oracle_verify(const OracleVerifyOptions& o);
int run_oracle_brute(const OracleBruteOptions& o);

}  // namespace andor::cli
