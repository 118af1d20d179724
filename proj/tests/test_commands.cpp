#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "commands.hpp"

using namespace archproof::cli;
using nlohmann::json;

namespace {

struct Captured {
  int code = -1;
  std::string out;
  std::string err;
};

template <typename Fn, typename Opt>
Captured run(Fn fn, const Opt& opt) {
  std::ostringstream out, err;
  Captured c;
  c.code = fn(opt, out, err);
  c.out = out.str();
  c.err = err.str();
  return c;
}

// Writes `text` to a throwaway file and returns its path.
std::string temp_file(const std::string& text) {
  std::string path = "/tmp/archproof_cmdtest.parch";
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  return path;
}

struct EnvGuard {
  explicit EnvGuard(const char* value) {
    setenv("ARCHPROOF_BUDGET", value, 1);
  }
  ~EnvGuard() { unsetenv("ARCHPROOF_BUDGET"); }
};

}  // namespace

TEST_SUITE("command layer") {

TEST_CASE("corpus report matches the expected access table byte for byte") {
  Captured c = run(cmd_corpus, CorpusOptions{});
  CHECK(c.code == kOk);
  CHECK(c.err.empty());
  CHECK(c.out ==
        "architecture  br    bs    integrity  status\n"
        "ed            I, T  T     yes        ok\n"
        "hsm           I, M  T, M  yes        ok\n"
        "hom           I     T     yes        ok\n"
        "moc           M     T, M  yes        ok\n"
        "result: ok\n");
}

TEST_CASE("corpus report is byte-stable across invocations") {
  Captured a = run(cmd_corpus, CorpusOptions{});
  Captured b = run(cmd_corpus, CorpusOptions{});
  CHECK(a.out == b.out);
  CorpusOptions jopt;
  jopt.json = true;
  Captured ja = run(cmd_corpus, jopt);
  Captured jb = run(cmd_corpus, jopt);
  CHECK(ja.out == jb.out);
  json doc = json::parse(ja.out);
  CHECK(doc["ok"] == true);
  CHECK(doc["rows"].size() == 4);
  CHECK(doc["rows"][0]["architecture"] == "ed");
  CHECK(doc["rows"][3]["bs"] == json::array({"T", "M"}));
}

TEST_CASE("check accepts every corpus file and reports the uniform bound") {
  CheckOptions ed{"corpus/ed.parch", false};
  Captured c = run(cmd_check, ed);
  CHECK(c.code == kOk);
  CHECK(c.out == "consistent: yes\nuniform bound: infinite\n");

  CheckOptions mie{"corpus/mi-e.parch", false};
  Captured b = run(cmd_check, mie);
  CHECK(b.code == kOk);
  CHECK(b.out == "consistent: yes\nuniform bound: 32\n");
}

TEST_CASE("check lists violations and exits nonzero on inconsistent input") {
  std::string path = temp_file(
      "component A;\n"
      "var x range 1;\n"
      "var y range 1;\n"
      "fun F/1;\n"
      "has^2 A(x);\n"
      "compute^3 {A} y = F(x);\n");
  Captured c = run(cmd_check, CheckOptions{path, false});
  CHECK(c.code == kNegative);
  CHECK(c.out.find("consistent: no\n") == 0);
  CHECK(c.out.find("violations:\n") != std::string::npos);
  CHECK(c.out.find("[mixed-multiplicity]") != std::string::npos);

  CheckOptions jopt{path, true};
  Captured j = run(cmd_check, jopt);
  CHECK(j.code == kNegative);
  json doc = json::parse(j.out);
  CHECK(doc["consistent"] == false);
  CHECK(doc["bound"].is_null());
  CHECK(doc["violations"][0]["code"] == "mixed-multiplicity");
  std::remove(path.c_str());
}

TEST_CASE("check reports unreadable and unparsable files as input errors") {
  Captured missing = run(cmd_check, CheckOptions{"corpus/nope.parch", false});
  CHECK(missing.code == kInputError);
  CHECK(missing.err.find("cannot read file") != std::string::npos);

  std::string path = temp_file("component ;;\n");
  Captured bad = run(cmd_check, CheckOptions{path, false});
  CHECK(bad.code == kInputError);
  CHECK(bad.err.find("error:") == 0);
  std::remove(path.c_str());
}

TEST_CASE("prove reports derivability and hides the tree unless asked") {
  ProveOptions opt;
  opt.path = "corpus/ed.parch";
  opt.query = "knows T (dec = Mu(br, bs, thr))";
  Captured c = run(cmd_prove, opt);
  CHECK(c.code == kOk);
  CHECK(c.out.find("query: ") == 0);
  CHECK(c.out.find("result: derivable\n") != std::string::npos);
  CHECK(c.out.find("proof") == std::string::npos);

  opt.explain_proof = true;
  Captured full = run(cmd_prove, opt);
  CHECK(full.code == kOk);
  CHECK(full.out.find("proof (") != std::string::npos);
  CHECK(full.out.find("[K-DED]") != std::string::npos);
}

TEST_CASE("prove exits 1 on underivable properties") {
  ProveOptions opt;
  opt.path = "corpus/ed.parch";
  opt.query = "has S(br)";
  Captured c = run(cmd_prove, opt);
  CHECK(c.code == kNegative);
  CHECK(c.out.find("result: not derivable\n") != std::string::npos);
}

TEST_CASE("prove rejects malformed queries and unknown names") {
  ProveOptions opt;
  opt.path = "corpus/ed.parch";
  opt.query = "knows T (dec = ";
  CHECK(run(cmd_prove, opt).code == kInputError);
  opt.query = "has Z(br)";
  Captured c = run(cmd_prove, opt);
  CHECK(c.code == kInputError);
  CHECK(c.err.find("unknown component") != std::string::npos);
}

TEST_CASE("prove regenerates corpus entries when parameters are given") {
  ProveOptions opt;
  opt.path = "corpus/mi-e.parch";
  opt.query = "has^8 T(ind)";
  opt.params = "n=8";
  CHECK(run(cmd_prove, opt).code == kOk);
  opt.query = "has^9 T(ind)";
  CHECK(run(cmd_prove, opt).code == kNegative);

  // Parameters only make sense for built-in entries.
  std::string path = temp_file("component A;\n");
  ProveOptions alien;
  alien.path = path;
  alien.query = "has A(x)";
  alien.params = "n=8";
  Captured c = run(cmd_prove, alien);
  CHECK(c.code == kInputError);
  CHECK(c.err.find("built-in corpus entry") != std::string::npos);
  std::remove(path.c_str());

  ProveOptions badparam;
  badparam.path = "corpus/mi-e.parch";
  badparam.query = "has T(ind)";
  badparam.params = "n=0";
  CHECK(run(cmd_prove, badparam).code == kInputError);
  badparam.params = "x=3";
  CHECK(run(cmd_prove, badparam).code == kInputError);
  badparam.params = "n=2,n=3";
  CHECK(run(cmd_prove, badparam).code == kInputError);
}

TEST_CASE("prove signals budget exhaustion with exit code 3") {
  EnvGuard guard("1");  // one saturation round is never enough for ed
  ProveOptions opt;
  opt.path = "corpus/ed.parch";
  opt.query = "knows T (dec = Mu(br, bs, thr))";
  Captured c = run(cmd_prove, opt);
  CHECK(c.code == kExhausted);
  CHECK(c.err.find("error:") == 0);
}

TEST_CASE("prove json mirrors the verdict and saturation statistics") {
  ProveOptions opt;
  opt.path = "corpus/ed.parch";
  opt.query = "knows T (dec = Mu(br, bs, thr))";
  opt.json = true;
  Captured c = run(cmd_prove, opt);
  CHECK(c.code == kOk);
  json doc = json::parse(c.out);
  CHECK(doc["derivable"] == true);
  CHECK(doc["proof"]["conclusion"] == "knows T (dec = Mu(br, bs, thr))");
  CHECK_FALSE(doc["proof"]["rule"].get<std::string>().empty());
  CHECK_FALSE(doc["proof"]["premises"].empty());
  CHECK(doc["saturation"]["possession_facts"].get<int>() > 0);
  CHECK(doc["saturation"]["universe"].get<int>() > 0);

  opt.query = "has S(br)";
  Captured neg = run(cmd_prove, opt);
  CHECK(neg.code == kNegative);
  json ndoc = json::parse(neg.out);
  CHECK(ndoc["derivable"] == false);
  CHECK(ndoc["proof"].is_null());
}

TEST_CASE("simulate prints the covering trace and final state") {
  SimulateOptions opt;
  opt.path = "corpus/ed.parch";
  Captured c = run(cmd_simulate, opt);
  CHECK(c.code == kOk);
  CHECK(c.out.find("covering trace (") == 0);
  CHECK(c.out.find("final state:\n") != std::string::npos);
  Captured again = run(cmd_simulate, opt);
  CHECK(c.out == again.out);  // deterministic bytes
}

TEST_CASE("simulate evaluates queries with the three-way exit code") {
  SimulateOptions opt;
  opt.path = "corpus/ed.parch";
  opt.samples = 100;
  opt.eval_query = "has T(dec)";
  Captured w = run(cmd_simulate, opt);
  CHECK(w.code == kOk);
  CHECK(w.out.find("outcome: witnessed\n") != std::string::npos);

  opt.eval_query = "hasnone T(dec)";
  Captured r = run(cmd_simulate, opt);
  CHECK(r.code == kNegative);
  CHECK(r.out.find("outcome: refuted\n") != std::string::npos);

  opt.eval_query = "hasnone S(br)";
  Captured i = run(cmd_simulate, opt);
  CHECK(i.code == kExhausted);
  CHECK(i.out.find("outcome: inconclusive\n") != std::string::npos);

  opt.json = true;
  opt.eval_query = "has T(dec)";
  Captured j = run(cmd_simulate, opt);
  CHECK(j.code == kOk);
  CHECK(json::parse(j.out)["outcome"] == "witnessed");
}

TEST_CASE("attack emits one csv row per seed under a fixed header") {
  AttackOptions opt;
  opt.seeds = 3;
  Captured c = run(cmd_attack, opt);
  CHECK(c.code == kOk);
  std::istringstream lines(c.out);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "seed,N,Q,C,B,budget,accuracy");
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line.find(std::to_string(rows) + ",8,16,2,0,512,") == 0);
    ++rows;
  }
  CHECK(rows == 3);
  Captured again = run(cmd_attack, opt);
  CHECK(c.out == again.out);  // seeded: byte-stable
}

TEST_CASE("attack validates its parameters") {
  AttackOptions opt;
  opt.c_nearest = 9;  // > n_rows
  CHECK(run(cmd_attack, opt).code == kInputError);

  AttackOptions epochs;
  epochs.epochs = 4;  // --epochs without --B
  Captured c = run(cmd_attack, epochs);
  CHECK(c.code == kInputError);
  CHECK(c.err.find("--epochs requires --B") != std::string::npos);

  AttackOptions mixed;
  mixed.all_rows = true;
  mixed.epoch_len = 4;
  CHECK(run(cmd_attack, mixed).code == kInputError);

  AttackOptions zero;
  zero.seeds = 0;
  CHECK(run(cmd_attack, zero).code == kInputError);
}

TEST_CASE("attack json carries the same rows as the csv") {
  AttackOptions opt;
  opt.seeds = 2;
  opt.json = true;
  Captured c = run(cmd_attack, opt);
  CHECK(c.code == kOk);
  json doc = json::parse(c.out);
  REQUIRE(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["seed"] == 0);
  CHECK(doc["rows"][0]["budget"] == 512);
  double acc = doc["rows"][0]["accuracy"].get<double>();
  CHECK(acc >= 0.0);
  CHECK(acc <= 1.0);
}

TEST_CASE("epoch length folds the budget into whole epochs") {
  AttackOptions opt;
  opt.epoch_len = 4;
  opt.epochs = 3;  // 12 queries total
  opt.seeds = 1;
  Captured c = run(cmd_attack, opt);
  CHECK(c.code == kOk);
  CHECK(c.out.find("0,8,16,2,4,12,") != std::string::npos);
}

}  // TEST_SUITE
