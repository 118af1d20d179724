// Entry point: `archproof <subcommand>` for checking, proving, simulating,
// corpus regression, and the counter-attack experiments.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace archproof::cli;

  CLI::App app{
      "Privacy-architecture verification toolkit: parse architecture "
      "descriptions, derive possession/privacy/integrity properties with "
      "explainable proofs, execute the trace semantics, and run the "
      "counter-based side-channel experiments.\n"
      "The ARCHPROOF_BUDGET environment variable overrides the prover's "
      "saturation round cap and the default simulation sample count."};
  app.require_subcommand(1);

  int rc = kOk;

  CheckOptions check;
  auto* cmd_c = app.add_subcommand(
      "check", "Parse an architecture file and report consistency");
  cmd_c->add_option("path", check.path, "architecture file (.parch)")
      ->required();
  cmd_c->add_flag("--json", check.json, "machine-readable output");
  cmd_c->callback([&] { rc = cmd_check(check, std::cout, std::cerr); });

  ProveOptions prove;
  auto* cmd_p = app.add_subcommand(
      "prove", "Decide a property query against an architecture");
  cmd_p->add_option("path", prove.path, "architecture file (.parch)")
      ->required();
  cmd_p->add_option("query", prove.query,
                    "property, e.g. \"hasnone S(br)\" or "
                    "\"knows T (dec = Mu(br, bs, thr))\"")
      ->required();
  cmd_p->add_option("--param", prove.params,
                    "regenerate the corpus entry named by the file basename "
                    "with these parameters, e.g. n=32,N=4,Q=8,C=2");
  cmd_p->add_flag("--explain", prove.explain_proof,
                  "print the full derivation tree");
  cmd_p->add_flag("--json", prove.json, "machine-readable output");
  cmd_p->callback([&] { rc = cmd_prove(prove, std::cout, std::cerr); });

  SimulateOptions simulate;
  auto* cmd_s = app.add_subcommand(
      "simulate",
      "Execute the architecture: print its covering trace, or evaluate a "
      "property against covering plus sampled traces");
  cmd_s->add_option("path", simulate.path, "architecture file (.parch)")
      ->required();
  cmd_s->add_option("--eval", simulate.eval_query,
                    "property to evaluate semantically");
  cmd_s->add_option("--samples", simulate.samples,
                    "number of sampled traces (default 1000)");
  cmd_s->add_option("--seed", simulate.seed, "sampler seed (default 1)");
  cmd_s->add_option("--max-len", simulate.max_len,
                    "events per sampled trace (default 64)");
  cmd_s->add_option("--param", simulate.params,
                    "regenerate the corpus entry named by the file basename "
                    "with these parameters, e.g. n=32,N=4,Q=8,C=2");
  cmd_s->add_flag("--json", simulate.json, "machine-readable output");
  cmd_s->callback([&] { rc = cmd_simulate(simulate, std::cout, std::cerr); });

  CorpusOptions corpus;
  auto* cmd_co = app.add_subcommand(
      "corpus",
      "Report template access and integrity across the four verification "
      "architectures and compare against the expected table");
  cmd_co->add_flag("--json", corpus.json, "machine-readable output");
  cmd_co->callback([&] { rc = cmd_corpus(corpus, std::cout, std::cerr); });

  AttackOptions attack;
  auto* cmd_a = app.add_subcommand(
      "attack",
      "Run the counter-based recovery attack against the identification "
      "module and emit one CSV row per seed");
  cmd_a->add_option("--N", attack.n_rows, "database rows (default 8)");
  cmd_a->add_option("--Q", attack.q_bits, "bits per row (default 16)");
  cmd_a->add_option("--C", attack.c_nearest,
                    "indices returned per query (default 2)");
  cmd_a->add_option("--budget", attack.budget,
                    "total queries per run (default 512)");
  cmd_a->add_option("--B", attack.epoch_len,
                    "re-randomize labels every B queries (default 0 = never)");
  cmd_a->add_option("--epochs", attack.epochs,
                    "number of epochs (default budget/B)");
  cmd_a->add_option("--seeds", attack.seeds,
                    "seeds 0..k-1 to run (default 20)");
  cmd_a->add_flag("--all-rows", attack.all_rows,
                  "update every row's counters on every query instead of "
                  "only the returned rows");
  cmd_a->add_flag("--json", attack.json, "machine-readable output");
  cmd_a->callback([&] { rc = cmd_attack(attack, std::cout, std::cerr); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  return rc;
}
