// Acceptance gate: eight end-to-end checks, one pass/fail line each.
// Usage: acceptance [N] — run criterion N (1..8), or all when omitted.
// Exits 0 iff every selected criterion passes.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "archproof/corpus.hpp"
#include "archproof/dsl.hpp"
#include "archproof/leakage.hpp"
#include "archproof/prover.hpp"
#include "archproof/trace.hpp"
#include "commands.hpp"
#include "semantics_cases.hpp"

using namespace archproof;

namespace {

// Accumulates sub-checks; keeps the first failure message.
struct Gate {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string read_file_bytes(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return {};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  std::fclose(f);
  return out;
}

void collect_rules(const ProofNode& node, std::multiset<std::string>& out) {
  out.insert(node.rule);
  for (const ProofNode& child : node.children) collect_rules(child, out);
}

Verdict prove(const Architecture& arch, const std::string& query) {
  return derive(arch, resolve_property(parse_query(query), arch));
}

// ---------------------------------------------------------------------------
// 1. The corpus report reproduces the expected access table, in under 1 s.
// ---------------------------------------------------------------------------
bool criterion1(Gate& g) {
  auto start = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  int rc = cli::cmd_corpus(cli::CorpusOptions{}, out, err);
  double elapsed = seconds_since(start);
  g.require(rc == 0, "corpus command exited " + std::to_string(rc));
  const std::string expected =
      "architecture  br    bs    integrity  status\n"
      "ed            I, T  T     yes        ok\n"
      "hsm           I, M  T, M  yes        ok\n"
      "hom           I     T     yes        ok\n"
      "moc           M     T, M  yes        ok\n"
      "result: ok\n";
  g.require(out.str() == expected, "table differs from the expected bytes");
  g.require(elapsed < 1.0,
            "took " + std::to_string(elapsed) + " s (limit 1 s)");
  return g.ok;
}

// ---------------------------------------------------------------------------
// 2. The verifier's integrity fact is derivable in all four base
//    architectures, every proof re-validates, and the ed derivation uses
//    attested decryption knowledge (K5), measured knowledge (K1), and a
//    deductive-rule step (K-DED).
// ---------------------------------------------------------------------------
bool criterion2(Gate& g) {
  const std::string query = "knows T (dec = Mu(br, bs, thr))";
  for (const std::string& name : {"ed", "hsm", "hom", "moc"}) {
    Architecture arch = instantiate_corpus(name);
    Verdict v = prove(arch, query);
    g.require(v.derivable, name + ": integrity fact not derivable");
    g.require(v.proof.has_value(), name + ": no proof returned");
    if (v.proof)
      g.require(validate_proof(arch, *v.proof),
                name + ": proof failed independent validation");
    if (name == "ed" && v.proof) {
      std::multiset<std::string> rules;
      collect_rules(*v.proof, rules);
      for (const char* rule : {"K5", "K1", "K-DED"})
        g.require(rules.count(rule) > 0,
                  std::string("ed: derivation does not use ") + rule);
    }
  }
  return g.ok;
}

// ---------------------------------------------------------------------------
// 3. Reference-template absence is derivable exactly where expected.
// ---------------------------------------------------------------------------
bool criterion3(Gate& g) {
  auto check = [&](const std::string& arch_name, const std::string& comp,
                   bool want) {
    Architecture arch = instantiate_corpus(arch_name);
    Verdict v = prove(arch, "hasnone " + comp + "(br)");
    g.require(v.derivable == want, arch_name + ": hasnone " + comp +
                                       "(br) expected " +
                                       (want ? "derivable" : "underivable"));
    if (want && v.proof)
      g.require(validate_proof(arch, *v.proof),
                arch_name + ": absence proof for " + comp + " failed validation");
  };
  check("ed", "S", true);
  check("hsm", "T", true);
  for (const std::string& comp : {"U", "T", "S", "M"}) check("hom", comp, true);
  for (const std::string& comp : {"U", "T"}) check("moc", comp, true);
  check("moc", "C", false);  // the card itself holds the reference
  return g.ok;
}

// ---------------------------------------------------------------------------
// 4. Bounded-query discrimination: with N=4, Q=8, C=2, absence of the
//    quantized reference at T is derivable for the dependence-pruned,
//    blocking, and reset variants, but not for the plain bounded one
//    (32 queries suffice to reassemble it).  Each query under 1 s.
// ---------------------------------------------------------------------------
bool criterion4(Gate& g) {
  CorpusParams params;  // n=32, N=4, Q=8, C=2, B=5
  auto timed_prove = [&](const std::string& name, bool want) {
    Architecture arch = instantiate_corpus(name, params);
    auto start = std::chrono::steady_clock::now();
    Verdict v = prove(arch, "hasnone T(qr)");
    double elapsed = seconds_since(start);
    g.require(v.derivable == want, name + ": hasnone T(qr) expected " +
                                       (want ? "derivable" : "underivable"));
    g.require(elapsed < 1.0, name + ": query took " +
                                 std::to_string(elapsed) + " s (limit 1 s)");
  };
  timed_prove("mi-e1", true);
  timed_prove("mi-e2", true);
  timed_prove("mi-e3", true);
  timed_prove("mi-e", false);
  return g.ok;
}

// ---------------------------------------------------------------------------
// 5. Cross-validation: per corpus entry, 10^4 seed-pinned sampled traces
//    never define a value whose absence the prover derived, and the covering
//    run witnesses every derived possession fact.  Under 2 min total.
// ---------------------------------------------------------------------------
bool criterion5(Gate& g) {
  auto start = std::chrono::steady_clock::now();
  constexpr std::size_t kSamples = 10000;
  constexpr std::uint64_t kSeed = 42;
  for (const std::string& name : corpus_names()) {
    Architecture arch = instantiate_corpus(name);
    FactBase fb = saturate(arch);

    // Subjects whose absence was derived = everything without a fact.
    std::vector<std::pair<ComponentId, std::string>> absent_vars, absent_consts;
    for (const ComponentId& comp : arch.components) {
      auto vf = fb.var_facts().find(comp);
      for (const VariableDecl& vd : arch.variables)
        if (vf == fb.var_facts().end() || !vf->second.count(vd.name))
          absent_vars.emplace_back(comp, vd.name);
      auto cf = fb.const_facts().find(comp);
      for (const std::string& konst : arch.constants)
        if (cf == fb.const_facts().end() || !cf->second.count(konst))
          absent_consts.emplace_back(comp, konst);
    }

    std::vector<Trace> traces = sample_traces(arch, kSamples, 64, kSeed);
    g.require(traces.size() == kSamples, name + ": sampler shortfall");
    for (const Trace& t : traces) {
      GlobalState st = initial_state(arch);
      for (const Event& e : t) {
        st = step_event(e, std::move(st), arch);
        for (const auto& [comp, var] : absent_vars)
          if (defined_count(st, comp, var) > 0) {
            g.require(false, name + ": sampled trace refutes hasnone " + comp +
                                 "(" + var + ")");
            return g.ok;
          }
        for (const auto& [comp, konst] : absent_consts)
          if (const_defined(st, comp, konst)) {
            g.require(false, name + ": sampled trace refutes hasnone " + comp +
                                 "(" + konst + ")");
            return g.ok;
          }
      }
    }

    GlobalState fin = run_trace(covering_trace(arch), arch);
    for (const auto& [comp, facts] : fb.var_facts())
      for (const auto& [var, entry] : facts) {
        std::size_t want = entry.count.is_infinite()
                               ? 1
                               : static_cast<std::size_t>(entry.count.value());
        g.require(defined_count(fin, comp, var) >= want,
                  name + ": covering run does not witness has " + comp + "(" +
                      var + ")");
      }
    for (const auto& [comp, facts] : fb.const_facts())
      for (const auto& [konst, entry] : facts)
        g.require(const_defined(fin, comp, konst),
                  name + ": covering run does not witness has " + comp + "(" +
                      konst + ")");
  }
  double elapsed = seconds_since(start);
  g.require(elapsed < 120.0,
            "took " + std::to_string(elapsed) + " s (limit 120 s)");
  return g.ok;
}

// ---------------------------------------------------------------------------
// 6. The twelve-case golden suite of the execution semantics.
// ---------------------------------------------------------------------------
bool criterion6(Gate& g) {
  std::vector<testing::SemanticsCheck> checks =
      testing::run_semantics_golden_suite();
  g.require(checks.size() == 12,
            "expected 12 cases, got " + std::to_string(checks.size()));
  for (const testing::SemanticsCheck& c : checks)
    g.require(c.pass, c.name + ": " + c.detail);
  return g.ok;
}

// ---------------------------------------------------------------------------
// 7. The counter attack recovers the unprotected database, and both
//    countermeasures hold it to chance.  Under 1 min.
// ---------------------------------------------------------------------------
bool criterion7(Gate& g) {
  auto start = std::chrono::steady_clock::now();
  constexpr std::size_t kSeeds = 20;

  ExperimentSpec unprotected;  // 8 rows, 16 bits, C=2, 512 queries
  double base = median_bit_accuracy(unprotected, kSeeds);
  g.require(base >= 0.95, "unprotected median " + std::to_string(base) +
                              " below 0.95 at budget 512");

  ExperimentSpec all_rows = unprotected;
  all_rows.c_nearest = all_rows.n_rows;  // answer with every row
  double v1 = median_bit_accuracy(all_rows, kSeeds);
  g.require(v1 <= 0.60,
            "full-answer variant median " + std::to_string(v1) + " above 0.60");

  ExperimentSpec shuffled = unprotected;
  shuffled.queries_per_epoch = 4;  // re-randomize labels every 4 queries
  double v3 = median_bit_accuracy(shuffled, kSeeds);
  g.require(v3 <= 0.60,
            "re-randomized variant median " + std::to_string(v3) + " above 0.60");

  double elapsed = seconds_since(start);
  g.require(elapsed < 60.0,
            "took " + std::to_string(elapsed) + " s (limit 60 s)");
  return g.ok;
}

// ---------------------------------------------------------------------------
// 8. parse∘render is the identity on the checked-in corpus files, and the
//    commands are byte-stable across repeated runs.
// ---------------------------------------------------------------------------
bool criterion8(Gate& g) {
  for (const std::string& name : corpus_names()) {
    std::string path = "corpus/" + name + ".parch";
    std::string bytes = read_file_bytes(path);
    g.require(!bytes.empty(), path + ": unreadable or empty");
    if (bytes.empty()) continue;
    std::string round;
    try {
      round = render(parse_architecture(bytes));
    } catch (const std::exception& e) {
      g.require(false, path + ": " + e.what());
      continue;
    }
    g.require(round == bytes, path + ": render(parse(file)) differs");
  }

  auto stable = [&](const std::string& label, auto fn) {
    std::ostringstream o1, e1, o2, e2;
    int r1 = fn(o1, e1);
    int r2 = fn(o2, e2);
    g.require(r1 == r2 && o1.str() == o2.str() && e1.str() == e2.str(),
              label + ": output differs between runs");
  };
  stable("corpus", [](std::ostream& o, std::ostream& e) {
    return cli::cmd_corpus(cli::CorpusOptions{}, o, e);
  });
  stable("check", [](std::ostream& o, std::ostream& e) {
    return cli::cmd_check({"corpus/mi-e.parch", false}, o, e);
  });
  stable("prove", [](std::ostream& o, std::ostream& e) {
    cli::ProveOptions opt;
    opt.path = "corpus/ed.parch";
    opt.query = "knows T (dec = Mu(br, bs, thr))";
    opt.explain_proof = true;
    return cli::cmd_prove(opt, o, e);
  });
  stable("simulate", [](std::ostream& o, std::ostream& e) {
    cli::SimulateOptions opt;
    opt.path = "corpus/mi-e3.parch";
    return cli::cmd_simulate(opt, o, e);
  });
  stable("attack", [](std::ostream& o, std::ostream& e) {
    cli::AttackOptions opt;
    opt.seeds = 5;
    return cli::cmd_attack(opt, o, e);
  });
  return g.ok;
}

struct Criterion {
  int number;
  const char* description;
  bool (*run)(Gate&);
};

const Criterion kCriteria[] = {
    {1, "expected access table reproduced byte-exactly within 1 s", criterion1},
    {2, "integrity fact derivable in all four base architectures with validating proofs",
     criterion2},
    {3, "reference-template absence derivable exactly where expected", criterion3},
    {4, "bounded-query discrimination separates protected variants within 1 s per query",
     criterion4},
    {5, "10^4 sampled traces per entry refute no derived absence; covering runs witness every fact",
     criterion5},
    {6, "twelve-case golden suite of the execution semantics", criterion6},
    {7, "counter attack recovers the unprotected database; countermeasures stay at chance",
     criterion7},
    {8, "corpus files round-trip byte-exactly; commands are byte-stable", criterion8},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 2) {
    std::fprintf(stderr, "usage: %s [criterion 1..8]\n", argv[0]);
    return 2;
  }
  if (argc == 2) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 8) {
      std::fprintf(stderr, "usage: %s [criterion 1..8]\n", argv[0]);
      return 2;
    }
  }

  bool all_ok = true;
  for (const Criterion& c : kCriteria) {
    if (only != 0 && c.number != only) continue;
    Gate gate;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(gate);
    } catch (const std::exception& e) {
      gate.require(false, std::string("unexpected exception: ") + e.what());
      ok = false;
    }
    double elapsed = seconds_since(start);
    if (ok) {
      std::printf("criterion %d: pass — %s (%.2f s)\n", c.number,
                  c.description, elapsed);
    } else {
      std::printf("criterion %d: FAIL — %s: %s (%.2f s)\n", c.number,
                  c.description, gate.detail.c_str(), elapsed);
      all_ok = false;
    }
  }
  return all_ok ? 0 : 1;
}
