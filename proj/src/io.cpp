#include "andor/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "andor/errors.hpp"

namespace andor::io {

using nlohmann::json;

std::string format_number(double x) {
  if (!std::isfinite(x)) throw NumericalError("cannot format a non-finite number");
  if (x == 0.0) return "0";
  char buf[1100];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed);
  if (r.ec != std::errc()) throw NumericalError("number formatting failed");
  return {buf, r.ptr};
}

std::string format_number(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string("NA");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("error writing " + path.string());
}

std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              std::string_view suffix) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() >= suffix.size() && name.ends_with(suffix)) out.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Numbers go through format_number so every document shares one spelling.
// nlohmann's own float output is replaced by splicing raw tokens.
class Writer {
 public:
  void raw(std::string_view s) { out_ += s; }
  void key(std::string_view k) {
    out_ += json(std::string(k)).dump();
    out_ += ": ";
  }
  void string(std::string_view s) { out_ += json(std::string(s)).dump(); }
  void number(double x) { out_ += format_number(x); }
  void integer(long long x) { out_ += std::to_string(x); }
  void numbers(std::span<const double> xs) {
    out_ += '[';
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out_ += ", ";
      number(xs[i]);
    }
    out_ += ']';
  }
  std::string take() && { return std::move(out_); }

 private:
  std::string out_;
};

json parse_document(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, e.byte, e.what());
  }
}

const json& field(const json& doc, const char* name, const std::string& source) {
  if (!doc.is_object()) throw ParseError(source, 0, "expected a JSON object");
  const auto it = doc.find(name);
  if (it == doc.end()) throw ParseError(source, 0, std::string("missing field '") + name + "'");
  return *it;
}

double number_field(const json& j, const char* name, const std::string& source) {
  if (!j.is_number()) throw ParseError(source, 0, std::string("field '") + name + "' must be a number");
  return j.get<double>();
}

int variable_count(const json& doc, const std::string& source) {
  const json& n = field(doc, "n", source);
  if (!n.is_number_integer()) throw ParseError(source, 0, "field 'n' must be an integer");
  const auto value = n.get<long long>();
  if (value < 1 || value > config::kMaxVariables) {
    throw ParseError(source, 0, "n = " + std::to_string(value) + " outside [1, " +
                                    std::to_string(config::kMaxVariables) + "]");
  }
  return static_cast<int>(value);
}

std::string string_field(const json& doc, const char* name, const std::string& source) {
  const json& s = field(doc, name, source);
  if (!s.is_string()) throw ParseError(source, 0, std::string("field '") + name + "' must be a string");
  return s.get<std::string>();
}

LatticeVector dense_field(const json& doc, const char* name, int n, const std::string& source) {
  const json& arr = field(doc, name, source);
  if (!arr.is_array() || arr.size() != table_size(n)) {
    throw ParseError(source, 0, std::string("field '") + name + "' must be an array of 2^n numbers");
  }
  std::vector<double> values;
  values.reserve(arr.size());
  for (const auto& x : arr) values.push_back(number_field(x, name, source));
  try {
    return LatticeVector(n, std::move(values));
  } catch (const std::exception& e) {
    throw ParseError(source, 0, e.what());
  }
}

std::map<Mask, double> sparse_field(const json& doc, const char* name, int n, const std::string& source) {
  const json& arr = field(doc, name, source);
  if (!arr.is_array()) throw ParseError(source, 0, std::string("field '") + name + "' must be an array");
  std::map<Mask, double> out;
  for (const auto& e : arr) {
    const json& m = field(e, "mask", source);
    if (!m.is_number_unsigned() || m.get<unsigned long long>() > full_mask(n)) {
      throw ParseError(source, 0, std::string("bad mask in '") + name + "'");
    }
    const double value = number_field(field(e, "value", source), "value", source);
    if (!out.emplace(static_cast<Mask>(m.get<unsigned long long>()), value).second) {
      throw ParseError(source, 0, std::string("repeated mask in '") + name + "'");
    }
  }
  return out;
}

void write_effects(Writer& w, const std::map<Mask, double>& effects) {
  w.raw("[");
  bool first = true;
  for (const auto& [mask, value] : effects) {
    w.raw(first ? "\n    " : ",\n    ");
    first = false;
    w.raw("{");
    w.key("mask");
    w.integer(mask);
    w.raw(", ");
    w.key("value");
    w.number(value);
    w.raw("}");
  }
  w.raw(first ? "]" : "\n  ]");
}

std::map<Mask, double> nonzero(const LatticeVector& u) {
  std::map<Mask, double> out;
  for (std::size_t t = 1; t < u.size(); ++t) {
    const double x = u[static_cast<Mask>(t)];
    if (x != 0.0) out.emplace(static_cast<Mask>(t), x);
  }
  return out;
}

template <class F>
auto with_source(const std::filesystem::path& path, F&& parse) {
  return parse(read_text(path), path.string());
}

}  // namespace

std::string serialize(const ValueTable& table) {
  Writer w;
  w.raw("{\n  ");
  w.key("n");
  w.integer(table.n());
  w.raw(",\n  ");
  w.key("label");
  w.string(table.label);
  w.raw(",\n  ");
  w.key("meta");
  w.string(table.meta);
  w.raw(",\n  ");
  w.key("values");
  w.numbers(table.values.values());
  w.raw("\n}\n");
  return std::move(w).take();
}

ValueTable parse_value_table(std::string_view text, const std::string& source) {
  const json doc = parse_document(text, source);
  const int n = variable_count(doc, source);
  ValueTable t{dense_field(doc, "values", n, source), string_field(doc, "label", source), {}};
  if (doc.contains("meta")) t.meta = string_field(doc, "meta", source);
  return t;
}

ValueTable read_value_table(const std::filesystem::path& path) {
  return with_source(path, parse_value_table);
}

std::string serialize(const InteractionSet& set, std::optional<double> tau) {
  Writer w;
  w.raw("{\n  ");
  w.key("n");
  w.integer(set.n());
  w.raw(",\n  ");
  w.key("label");
  w.string(set.label);
  w.raw(",\n  ");
  w.key("bias");
  w.number(set.bias);
  w.raw(",\n  ");
  w.key("tau");
  if (tau) {
    w.number(*tau);
  } else {
    w.raw("null");
  }
  w.raw(",\n  ");
  w.key("and");
  write_effects(w, nonzero(set.i_and));
  w.raw(",\n  ");
  w.key("or");
  write_effects(w, nonzero(set.i_or));
  w.raw("\n}\n");
  return std::move(w).take();
}

StoredInteractions parse_interactions(std::string_view text, const std::string& source) {
  const json doc = parse_document(text, source);
  const int n = variable_count(doc, source);
  std::vector<double> i_and(table_size(n), 0.0), i_or(table_size(n), 0.0);
  for (const auto& [t, c] : sparse_field(doc, "and", n, source)) i_and[t] = c;
  for (const auto& [t, c] : sparse_field(doc, "or", n, source)) i_or[t] = c;
  if (i_and[0] != 0.0 || i_or[0] != 0.0) throw ParseError(source, 0, "the empty set carries no effect");
  StoredInteractions out{
      {LatticeVector(n, std::move(i_and)), LatticeVector(n, std::move(i_or)),
       number_field(field(doc, "bias", source), "bias", source), string_field(doc, "label", source)},
      std::nullopt};
  const json& tau = field(doc, "tau", source);
  if (!tau.is_null()) out.tau = number_field(tau, "tau", source);
  return out;
}

StoredInteractions read_interactions(const std::filesystem::path& path) {
  return with_source(path, parse_interactions);
}

std::string serialize(const Decomposition& d) {
  Writer w;
  w.raw("{\n  ");
  w.key("n");
  w.integer(d.gamma.n());
  w.raw(",\n  ");
  w.key("zeta_bound");
  w.number(d.zeta_bound);
  w.raw(",\n  ");
  w.key("gamma");
  w.numbers(d.gamma.values());
  w.raw(",\n  ");
  w.key("delta");
  w.numbers(d.delta.values());
  w.raw("\n}\n");
  return std::move(w).take();
}

Decomposition parse_decomposition(std::string_view text, const std::string& source) {
  const json doc = parse_document(text, source);
  const int n = variable_count(doc, source);
  return {dense_field(doc, "gamma", n, source), dense_field(doc, "delta", n, source),
          number_field(field(doc, "zeta_bound", source), "zeta_bound", source)};
}

Decomposition read_decomposition(const std::filesystem::path& path) {
  return with_source(path, parse_decomposition);
}

std::string serialize_truth(std::span<const TruthRecord> records) {
  Writer w;
  w.raw("{\n");
  w.key("samples");
  w.raw("[");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TruthRecord& r = records[i];
    w.raw(i ? ",\n{\n  " : "\n{\n  ");
    w.key("label");
    w.string(r.label);
    w.raw(",\n  ");
    w.key("n");
    w.integer(r.game.n());
    w.raw(",\n  ");
    w.key("bias");
    w.number(r.game.bias());
    w.raw(",\n  ");
    w.key("injected");
    w.raw(r.injected ? "true" : "false");
    w.raw(",\n  ");
    w.key("and");
    write_effects(w, r.game.and_effects());
    w.raw(",\n  ");
    w.key("or");
    write_effects(w, r.game.or_effects());
    w.raw("\n}");
  }
  w.raw(records.empty() ? "]\n}\n" : "\n]\n}\n");
  return std::move(w).take();
}

std::vector<TruthRecord> parse_truth(std::string_view text, const std::string& source) {
  const json doc = parse_document(text, source);
  const json& samples = field(doc, "samples", source);
  if (!samples.is_array()) throw ParseError(source, 0, "field 'samples' must be an array");
  std::vector<TruthRecord> out;
  for (const auto& s : samples) {
    const int n = variable_count(s, source);
    const json& injected = field(s, "injected", source);
    if (!injected.is_boolean()) throw ParseError(source, 0, "field 'injected' must be a boolean");
    try {
      out.push_back({string_field(s, "label", source),
                     GroundTruthGame(n, sparse_field(s, "and", n, source), sparse_field(s, "or", n, source),
                                     number_field(field(s, "bias", source), "bias", source)),
                     injected.get<bool>()});
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(source, 0, e.what());
    }
  }
  return out;
}

std::string profile_csv(std::span<const SampleReport> reports) {
  std::string out = "sample_label,k,j_pos,j_neg,offset_mass\n";
  for (const auto& r : reports) {
    for (int k = 1; k <= r.profile.n; ++k) {
      out += r.label + "," + std::to_string(k) + "," + format_number(r.profile.pos(k)) + "," +
             format_number(r.profile.neg(k)) + "," + format_number(r.profile.offset_mass(k)) + "\n";
    }
  }
  return out;
}

std::string samples_csv(std::span<const SampleReport> reports) {
  std::string out = "sample_label,eta_avg,salient_count,total_l1,confusing\n";
  for (const auto& r : reports) {
    out += r.label + "," + format_number(r.eta_avg) + "," + std::to_string(r.salient_count) + "," +
           format_number(r.total_l1) + "," + (r.confusing ? "1" : "0") + "\n";
  }
  return out;
}

std::string similarity_csv(const SimilarityReport& report) {
  std::string out = "k,sim\nall," + format_number(report.sim_global) + "\n";
  for (std::size_t k = 0; k < report.sim_per_order.size(); ++k) {
    out += std::to_string(k + 1) + "," + format_number(report.sim_per_order[k]) + "\n";
  }
  return out;
}

std::string loss_csv(std::span<const std::pair<std::string, std::vector<double>>> histories) {
  std::string out = "sample_label,checkpoint,loss\n";
  for (const auto& [label, losses] : histories) {
    for (std::size_t i = 0; i < losses.size(); ++i) {
      out += label + "," + std::to_string(i) + "," + format_number(losses[i]) + "\n";
    }
  }
  return out;
}

std::string comparison_points_csv(const PairComparison& c) {
  std::string out = "sample_label,eta_a,eta_b\n";
  for (const auto& p : c.points) {
    out += p.label + "," + format_number(p.eta_a) + "," + format_number(p.eta_b) + "\n";
  }
  return out;
}

std::string comparison_summary(const PairComparison& c) {
  return "common_samples: " + std::to_string(c.points.size()) + "\n" +
         "rank_correlation: " + format_number(c.rank_correlation) + "\n" +
         "mean_abs_diagonal_gap: " + format_number(c.mean_abs_diagonal_gap) + "\n" +
         "overlap: " + format_number(c.overlap) + "\n";
}

std::string diagnostic_report(const std::string& label, const SparsityDiagnostic& d) {
  std::string out = "sample: " + label + "\n";
  out += "condition1: " + std::string(d.condition1_ok ? "pass" : "fail") +
         " max_salient_order=" + std::to_string(d.max_salient_order) +
         " bound=" + std::to_string(d.max_order_bound) + "\n";
  out += "condition2: " + std::string(d.condition2_ok ? "pass" : "fail") + " first_violation_k=" +
         (d.condition2_violation ? std::to_string(*d.condition2_violation) : std::string("NA")) + "\n";
  out += "mean_confidence:";
  for (double u : d.mean_confidence) out += " " + format_number(u);
  out += "\n";
  out += "condition3: " + std::string(d.condition3_infeasible ? "infeasible" : "pass") +
         " min_p=" + format_number(d.condition3_min_p) + "\n";
  out += "salient_count: " + std::to_string(d.salient_count) + "\n";
  out += "kappa_fit: " + format_number(d.kappa_fit) + "\n";
  return out;
}

std::string axiom_report(const AxiomSuiteConfig& cfg, std::span<const AxiomResult> results) {
  std::string out = "n: " + std::to_string(cfg.n) + "\ntrials: " + std::to_string(cfg.trials) +
                    "\nseed: " + std::to_string(cfg.seed) + "\ntolerance: " + format_number(cfg.tolerance) +
                    "\n";
  for (const auto& r : results) {
    out += std::string(to_string(r.axiom)) + ": " + (r.passed() ? "pass" : "FAIL") +
           " failures=" + std::to_string(r.failures) + " max_error=" + format_number(r.max_error) + "\n";
    if (r.counterexample) {
      out += "  first counterexample: trial " + std::to_string(r.counterexample->trial) + ", " +
             r.counterexample->detail + "\n";
    }
  }
  return out;
}

}  // namespace andor::io
