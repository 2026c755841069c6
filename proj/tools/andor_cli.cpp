#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "andor/errors.hpp"
#include "commands.hpp"

namespace {

using namespace andor::cli;

void add_tau_override(CLI::App* cmd, std::optional<double>& tau) {
  cmd->add_option("--tau-absolute", tau, "Fixed salience threshold instead of the batch one");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AND-OR interaction extraction and analysis"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto* s = app.add_subcommand("synth", "Write synthetic value tables and a ground-truth sidecar");
  s->add_option("--out", synth.out, "Output directory")->required();
  s->add_option("--seed", synth.seed);
  s->add_option("--samples", synth.samples);
  s->add_option("--game", synth.game, "Game parameters: n= m= orders=lo-hi or= range= floor=");
  s->add_option("--overfit-fraction", synth.overfit_fraction)->check(CLI::Range(0.0, 1.0));
  s->add_option("--overfit-min-order", synth.overfit_min_order);
  s->add_option("--overfit-pairs", synth.overfit_pairs);
  s->add_option("--overfit-magnitude", synth.overfit_magnitude);
  s->add_option("--interaction", synth.interaction, "Single interaction function: and | or")
      ->check(CLI::IsMember({"and", "or"}));
  s->add_option("--mask", synth.mask, "Subset mask, decimal, 0x or 0b");
  s->add_option("--c", synth.c);
  s->add_option("--n", synth.n);
  s->add_flag("--net", synth.net, "Tables from a small random network");
  s->add_option("--hidden", synth.hidden);
  s->add_option("--classes", synth.classes);
  s->add_flag("--generalization", synth.generalization,
              "train/ and test/ populations sharing low-order effects");

  ExtractOptions extract;
  auto* e = app.add_subcommand("extract", "Extract AND-OR interactions from value tables");
  e->add_option("--in", extract.in, "Directory of *.table.json")->required();
  e->add_option("--out", extract.out)->required();
  e->add_option("--mode", extract.mode)->check(CLI::IsMember({"sparsify", "all-and", "even-split", "truth"}));
  e->add_option("--truth", extract.truth, "Ground-truth sidecar for --mode truth");
  e->add_flag("--no-denoise", extract.no_denoise);
  e->add_option("--zeta-fraction", extract.zeta_fraction);
  e->add_option("--tau-fraction", extract.tau_fraction);
  add_tau_override(e, extract.tau_absolute);
  e->add_option("--max-iters", extract.max_iters);
  e->add_option("--step", extract.step);
  e->add_option("--eps", extract.eps);
  e->add_option("--check-interval", extract.check_interval);

  ProfileOptions profile;
  auto* p = app.add_subcommand("profile", "Per-sample order profiles and confusing flags");
  p->add_option("--in", profile.in, "Directory of *.interactions.json")->required();
  p->add_option("--out", profile.out)->required();
  p->add_option("--theta", profile.theta, "Confusing threshold (default n/2)");
  add_tau_override(p, profile.tau_absolute);

  SimilarityOptions similarity;
  auto* m = app.add_subcommand("similarity", "Per-order Jaccard similarity of two populations");
  m->add_option("--train", similarity.train)->required();
  m->add_option("--test", similarity.test)->required();
  m->add_option("--out", similarity.out, "CSV file")->required();
  add_tau_override(m, similarity.tau_absolute);

  CompareOptions compare;
  auto* c = app.add_subcommand("compare", "Compare confusing samples of two models");
  c->add_option("a", compare.a)->required();
  c->add_option("b", compare.b)->required();
  c->add_option("--out", compare.out)->required();
  c->add_option("--theta", compare.theta);
  add_tau_override(c, compare.tau_absolute);

  DiagnoseOptions diagnose;
  auto* d = app.add_subcommand("diagnose", "Sparsity conditions per sample");
  d->add_option("--tables", diagnose.tables)->required();
  d->add_option("--interactions", diagnose.interactions)->required();
  d->add_option("--out", diagnose.out)->required();
  d->add_option("--max-order", diagnose.max_order, "Condition-1 order bound (default n)");
  add_tau_override(d, diagnose.tau_absolute);

  AxiomsOptions axioms;
  auto* x = app.add_subcommand("axioms", "Randomized AND-interaction axiom suite");
  x->add_option("--n", axioms.n);
  x->add_option("--trials", axioms.trials);
  x->add_option("--seed", axioms.seed);
  x->add_option("--out", axioms.out, "Report file (default stdout)");

  auto* o = app.add_subcommand("oracle", "Brute-force reference checks");
  o->group("");
  o->require_subcommand(1);
  OracleVerifyOptions verify;
  auto* ov = o->add_subcommand("verify", "Exhaustive universal-matching check");
  ov->add_option("--table", verify.table)->required();
  ov->add_option("--decomposition", verify.decomposition)->required();
  ov->add_option("--interactions", verify.interactions)->required();
  OracleBruteOptions brute;
  auto* ob = o->add_subcommand("brute", "Literal-sum effects of a table");
  ob->add_option("--table", brute.table)->required();
  ob->add_option("--kind", brute.kind)->check(CLI::IsMember({"and", "or"}));
  ob->add_option("--out", brute.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kUsageOrIo;
  }

  try {
    if (*s) return run_synth(synth);
    if (*e) return run_extract(extract);
    if (*p) return run_profile(profile);
    if (*m) return run_similarity(similarity);
    if (*c) return run_compare(compare);
    if (*d) return run_diagnose(diagnose);
    if (*x) return run_axioms(axioms);
    if (*ov) return run_oracle_verify(verify);
    if (*ob) return run_oracle_brute(brute);
  } catch (const andor::ParseError& err) {
    std::cerr << "parse error: " << err.what() << "\n";
    return kUsageOrIo;
  } catch (const andor::IoError& err) {
    std::cerr << "i/o error: " << err.what() << "\n";
    return kUsageOrIo;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsageOrIo;
  }
  return kUsageOrIo;
}
