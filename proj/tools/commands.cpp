#include "commands.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>

#include "andor/analysis.hpp"
#include "andor/errors.hpp"
#include "andor/extraction.hpp"
#include "andor/io.hpp"
#include "andor/metrics.hpp"
#include "andor/oracle.hpp"
#include "andor/population.hpp"

namespace andor::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kTableSuffix = ".table.json";
constexpr std::string_view kInteractionSuffix = ".interactions.json";
constexpr std::string_view kDecompositionSuffix = ".decomposition.json";
constexpr const char* kTruthFile = "truth.json";

template <class T>
struct Named {
  std::string stem;
  std::string file;
  T item;
};

std::string stem_of(const fs::path& p, std::string_view suffix) {
  const std::string name = p.filename().string();
  return name.substr(0, name.size() - suffix.size());
}

template <class T>
void check_same_n(const std::vector<Named<T>>& items, auto n_of) {
  for (const auto& x : items) {
    if (n_of(x.item) != n_of(items.front().item)) {
      throw ArgumentError("mixed n: " + items.front().file + " has n = " +
                          std::to_string(n_of(items.front().item)) + " but " + x.file + " has n = " +
                          std::to_string(n_of(x.item)));
    }
  }
}

std::vector<Named<ValueTable>> load_tables(const std::string& dir) {
  std::vector<Named<ValueTable>> out;
  for (const auto& p : io::list_files(dir, kTableSuffix)) {
    out.push_back({stem_of(p, kTableSuffix), p.string(), io::read_value_table(p)});
  }
  if (out.empty()) throw IoError("no *" + std::string(kTableSuffix) + " files in " + dir);
  check_same_n(out, [](const ValueTable& t) { return t.n(); });
  return out;
}

std::vector<Named<io::StoredInteractions>> load_interactions(const std::string& dir) {
  std::vector<Named<io::StoredInteractions>> out;
  for (const auto& p : io::list_files(dir, kInteractionSuffix)) {
    out.push_back({stem_of(p, kInteractionSuffix), p.string(), io::read_interactions(p)});
  }
  if (out.empty()) throw IoError("no *" + std::string(kInteractionSuffix) + " files in " + dir);
  check_same_n(out, [](const io::StoredInteractions& s) { return s.set.n(); });
  return out;
}

std::vector<InteractionSet> sets_of(const std::vector<Named<io::StoredInteractions>>& items) {
  std::vector<InteractionSet> out;
  for (const auto& x : items) out.push_back(x.item.set);
  return out;
}

// The override if given; else the threshold stored with the files when they
// all carry the same one; else the batch threshold over every set processed.
double batch_tau(std::optional<double> override_tau,
                 std::initializer_list<const std::vector<Named<io::StoredInteractions>>*> batches) {
  if (override_tau) {
    if (!(*override_tau >= 0.0)) throw ArgumentError("--tau-absolute must be non-negative");
    return *override_tau;
  }
  std::optional<double> stored;
  bool agree = true;
  std::vector<InteractionSet> all;
  for (const auto* batch : batches) {
    for (const auto& x : *batch) {
      all.push_back(x.item.set);
      if (!x.item.tau || (stored && *stored != *x.item.tau)) {
        agree = false;
      } else {
        stored = x.item.tau;
      }
    }
  }
  if (agree && stored) return *stored;
  return salience_threshold(std::span<const InteractionSet>(all));
}

double theta_for(std::optional<double> theta, int n) {
  return theta ? *theta : default_confusion_threshold(n);
}

std::vector<SampleReport> reports_for(const std::vector<Named<io::StoredInteractions>>& items,
                                      double tau, double theta) {
  std::vector<SampleReport> out;
  for (const auto& x : items) out.push_back(sample_report(x.item.set, tau, theta));
  return out;
}

Mask parse_mask(const std::string& text, int n) {
  if (text.empty()) throw ArgumentError("--mask is required with --interaction");
  unsigned long long value = 0;
  std::size_t used = 0;
  try {
    if (text.starts_with("0b") || text.starts_with("0B")) {
      value = std::stoull(text.substr(2), &used, 2);
      used += 2;
    } else {
      value = std::stoull(text, &used, 0);
    }
  } catch (const std::exception&) {
    throw ArgumentError("bad mask '" + text + "'");
  }
  if (used != text.size()) throw ArgumentError("bad mask '" + text + "'");
  if (value == 0 || value > full_mask(n)) {
    throw ArgumentError("mask '" + text + "' must name a nonempty subset of " + std::to_string(n) + " variables");
  }
  return static_cast<Mask>(value);
}

SparseGameSpec parse_game(const std::vector<std::string>& tokens) {
  SparseGameSpec g;
  int lo = 2, hi = 4;
  for (const auto& token : tokens) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ArgumentError("--game expects key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      if (key == "n") {
        g.n = std::stoi(value);
      } else if (key == "m") {
        g.effect_count = std::stoul(value);
      } else if (key == "orders") {
        const auto dash = value.find('-');
        lo = std::stoi(value.substr(0, dash));
        hi = dash == std::string::npos ? lo : std::stoi(value.substr(dash + 1));
      } else if (key == "or") {
        g.or_probability = std::stod(value);
      } else if (key == "range") {
        g.effect_range = std::stod(value);
      } else if (key == "floor") {
        g.magnitude_floor = std::stod(value);
      } else if (key == "bias") {
        g.bias_range = std::stod(value);
      } else {
        throw ArgumentError("unknown --game key '" + key + "'");
      }
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const ArgumentError*>(&e)) throw;
      throw ArgumentError("bad value in --game " + token);
    }
  }
  check_variable_count(g.n, config::kMaxSparsifyVariables);
  if (lo < 1 || hi < lo || hi > g.n) throw ArgumentError("--game orders must satisfy 1 <= lo <= hi <= n");
  g.order_weights = uniform_order_weights(g.n, lo, hi);
  return g;
}

void write_population(const fs::path& dir, const std::vector<PopulationSample>& samples) {
  std::vector<io::TruthRecord> truth;
  for (const auto& s : samples) {
    io::write_text(dir / (s.table.label + std::string(kTableSuffix)), io::serialize(s.table));
    if (s.game) truth.push_back({s.table.label, *s.game, s.injected});
  }
  if (!truth.empty()) io::write_text(dir / kTruthFile, io::serialize_truth(truth));
}

}  // namespace

int run_synth(const SynthOptions& o) {
  const int modes = !o.interaction.empty() + o.net + o.generalization;
  if (modes > 1) throw ArgumentError("choose at most one of --interaction, --net, --generalization");
  const fs::path out = o.out;

  if (!o.interaction.empty()) {
    check_variable_count(o.n);
    const Mask t = parse_mask(o.mask, o.n);
    const EffectKind kind = o.interaction == "and" ? EffectKind::kAnd : EffectKind::kOr;
    ValueTable table = interaction_function_table(SubsetIndex(t, o.n), o.c, kind);
    table.label = "interaction";
    std::map<Mask, double> effect{{t, o.c}};
    GroundTruthGame game(o.n, kind == EffectKind::kAnd ? effect : std::map<Mask, double>{},
                         kind == EffectKind::kOr ? effect : std::map<Mask, double>{}, 0.0);
    write_population(out, {{table, game, false}});
    std::cout << "wrote 1 table to " << out.string() << "\n";
    return kOk;
  }

  if (o.net) {
    NetPopulationSpec spec;
    spec.n = o.n;
    spec.samples = o.samples;
    spec.hidden = o.hidden;
    spec.classes = o.classes;
    spec.seed = o.seed;
    write_population(out, net_population(spec));
    std::cout << "wrote " << o.samples << " tables to " << out.string() << "\n";
    return kOk;
  }

  if (o.generalization) {
    GeneralizationSpec spec;
    spec.n = o.n;
    spec.samples = o.samples;
    spec.seed = o.seed;
    const GeneralizationPair pair = generalization_pair(spec);
    write_population(out / "train", pair.train);
    write_population(out / "test", pair.test);
    std::cout << "wrote " << o.samples << " train and " << o.samples << " test tables to " << out.string()
              << "\n";
    return kOk;
  }

  ConfusingPopulationSpec spec;
  spec.base.samples = o.samples;
  spec.base.game = parse_game(o.game);
  spec.base.seed = o.seed;
  spec.overfit_fraction = o.overfit_fraction;
  spec.overfit.min_order = o.overfit_min_order;
  spec.overfit.pair_count = o.overfit_pairs;
  spec.overfit.magnitude = o.overfit_magnitude;
  const auto samples = confusing_population(spec);
  write_population(out, samples);
  const auto injected = std::count_if(samples.begin(), samples.end(), [](const auto& s) { return s.injected; });
  std::cout << "wrote " << samples.size() << " tables (" << injected << " injected) to " << out.string()
            << "\n";
  return kOk;
}

int run_extract(const ExtractOptions& o) {
  const auto tables = load_tables(o.in);
  if (!(o.tau_fraction >= 0.0)) throw ArgumentError("--tau-fraction must be non-negative");
  std::vector<ValueTable> plain;
  for (const auto& t : tables) plain.push_back(t.item);
  double tau = 0.0;
  if (o.tau_absolute) {
    if (!(*o.tau_absolute >= 0.0)) throw ArgumentError("--tau-absolute must be non-negative");
    tau = *o.tau_absolute;
  } else {
    tau = salience_threshold(std::span<const ValueTable>(plain), o.tau_fraction);
  }

  std::map<std::string, GroundTruthGame> truth;
  if (o.mode == "truth") {
    if (o.truth.empty()) throw ArgumentError("--mode truth needs --truth");
    for (auto& r : io::parse_truth(io::read_text(o.truth), o.truth)) truth.emplace(r.label, std::move(r.game));
    for (const auto& t : tables) {
      if (!truth.contains(t.item.label)) {
        throw ArgumentError("no ground truth for " + t.file + " (label '" + t.item.label + "')");
      }
    }
  }

  SparsifyConfig cfg;
  cfg.max_iters = o.max_iters;
  cfg.step_size = o.step;
  cfg.convergence_eps = o.eps;
  cfg.zeta_fraction = o.zeta_fraction;
  cfg.denoise = !o.no_denoise;
  cfg.check_interval = o.check_interval;

  struct Output {
    Decomposition decomposition;
    InteractionSet set;
    std::vector<double> history;
  };
  std::vector<std::optional<Output>> results(tables.size());
  std::vector<std::exception_ptr> errors(tables.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < tables.size(); ++i) {
    try {
      const ValueTable& v = tables[i].item;
      if (o.mode == "sparsify") {
        SparsifyResult r = sparsify(v, cfg);
        results[i] = Output{std::move(r.decomposition), std::move(r.interactions), std::move(r.loss_history)};
      } else {
        Decomposition d = o.mode == "all-and"    ? Decomposition::all_and(v)
                          : o.mode == "even-split" ? Decomposition::even_split(v)
                                                   : Decomposition::from_game(truth.at(v.label), v);
        InteractionSet set = extract(v, d);
        std::vector<double> history{set.l1()};
        results[i] = Output{std::move(d), std::move(set), std::move(history)};
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  const fs::path out = o.out;
  std::vector<std::pair<std::string, std::vector<double>>> histories;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const Output& r = *results[i];
    io::write_text(out / (tables[i].stem + std::string(kInteractionSuffix)), io::serialize(r.set, tau));
    io::write_text(out / (tables[i].stem + std::string(kDecompositionSuffix)), io::serialize(r.decomposition));
    histories.emplace_back(tables[i].item.label, r.history);
  }
  io::write_text(out / "loss.csv", io::loss_csv(histories));
  io::write_text(out / "extract.txt", "mode: " + o.mode + "\nsamples: " + std::to_string(tables.size()) +
                                          "\ntau: " + io::format_number(tau) + "\n");
  std::cout << "extracted " << tables.size() << " samples, tau = " << io::format_number(tau) << "\n";
  return kOk;
}

int run_profile(const ProfileOptions& o) {
  const auto items = load_interactions(o.in);
  const double tau = batch_tau(o.tau_absolute, {&items});
  const auto reports = reports_for(items, tau, theta_for(o.theta, items.front().item.set.n()));
  const fs::path out = o.out;
  io::write_text(out / "profile.csv", io::profile_csv(reports));
  io::write_text(out / "samples.csv", io::samples_csv(reports));
  const auto flagged = std::count_if(reports.begin(), reports.end(), [](const auto& r) { return r.confusing; });
  std::cout << reports.size() << " samples, " << flagged << " confusing\n";
  return kOk;
}

int run_similarity(const SimilarityOptions& o) {
  const auto train = load_interactions(o.train);
  const auto test = load_interactions(o.test);
  if (train.front().item.set.n() != test.front().item.set.n()) {
    throw ArgumentError("mixed n: " + train.front().file + " vs " + test.front().file);
  }
  const double tau = batch_tau(o.tau_absolute, {&train, &test});
  const auto a = sets_of(train);
  const auto b = sets_of(test);
  const SimilarityReport report = per_order_jaccard(std::span<const InteractionSet>(a),
                                                    std::span<const InteractionSet>(b), tau);
  io::write_text(o.out, io::similarity_csv(report));
  std::cout << "sim_all = " << io::format_number(report.sim_global) << "\n";
  return kOk;
}

int run_compare(const CompareOptions& o) {
  const auto a = load_interactions(o.a);
  const auto b = load_interactions(o.b);
  if (a.front().item.set.n() != b.front().item.set.n()) {
    throw ArgumentError("mixed n: " + a.front().file + " vs " + b.front().file);
  }
  const double theta = theta_for(o.theta, a.front().item.set.n());
  const auto ra = reports_for(a, batch_tau(o.tau_absolute, {&a}), theta);
  const auto rb = reports_for(b, batch_tau(o.tau_absolute, {&b}), theta);
  const PairComparison c = compare_models(ra, rb);
  const fs::path out = o.out;
  io::write_text(out / "comparison.csv", io::comparison_points_csv(c));
  io::write_text(out / "comparison.txt", io::comparison_summary(c));
  std::cout << io::comparison_summary(c);
  return kOk;
}

int run_diagnose(const DiagnoseOptions& o) {
  const auto tables = load_tables(o.tables);
  const auto items = load_interactions(o.interactions);
  std::map<std::string, const io::StoredInteractions*> by_stem;
  for (const auto& x : items) by_stem.emplace(x.stem, &x.item);
  const double tau = batch_tau(o.tau_absolute, {&items});
  const int n = tables.front().item.n();
  const int bound = o.max_order.value_or(n);

  std::string report;
  bool all_ok = true;
  for (const auto& t : tables) {
    const auto it = by_stem.find(t.stem);
    if (it == by_stem.end()) throw ArgumentError("no interaction file for " + t.file);
    if (it->second->set.n() != t.item.n()) {
      throw ArgumentError("mixed n: " + t.file + " vs its interaction file");
    }
    const SparsityDiagnostic d = sparsity_diagnostics(t.item, it->second->set, tau, bound);
    all_ok = all_ok && d.condition1_ok && d.condition2_ok && !d.condition3_infeasible;
    report += io::diagnostic_report(t.item.label, d) + "\n";
  }
  io::write_text(o.out, report);
  std::cout << (all_ok ? "all conditions hold\n" : "some conditions fail\n");
  return all_ok ? kOk : kCheckFailed;
}

int run_axioms(const AxiomsOptions& o) {
  AxiomSuiteConfig cfg;
  cfg.n = o.n;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  const auto results = axiom_suite(cfg);
  const std::string report = io::axiom_report(cfg, results);
  if (o.out.empty()) {
    std::cout << report;
  } else {
    io::write_text(o.out, report);
  }
  const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed(); });
  return ok ? kOk : kCheckFailed;
}

int run_oracle_verify(const OracleVerifyOptions& o) {
  const ValueTable v = io::read_value_table(o.table);
  const Decomposition d = io::read_decomposition(o.decomposition);
  const InteractionSet set = io::read_interactions(o.interactions).set;
  if (d.gamma.n() != v.n() || set.n() != v.n()) {
    throw ArgumentError("mixed n among " + o.table + ", " + o.decomposition + ", " + o.interactions);
  }
  const double error = oracle::verify_matching(v, d, set);
  const double bound = config::kMatchingRelTol * std::max(1.0, v.values.max_abs());
  const bool ok = error <= bound;
  std::cout << "max_abs_error: " << io::format_number(error) << "\nbound: " << io::format_number(bound)
            << "\nresult: " << (ok ? "pass" : "fail") << "\n";
  return ok ? kOk : kCheckFailed;
}

int run_oracle_brute(const OracleBruteOptions& o) {
  const ValueTable v = io::read_value_table(o.table);
  ValueTable effects{o.kind == "and" ? oracle::brute_and(v.values) : oracle::brute_or(v.values),
                     v.label, "brute " + o.kind + " effects"};
  io::write_text(o.out, io::serialize(effects));
  return kOk;
}

}  // namespace andor::cli
