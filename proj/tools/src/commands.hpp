// Command implementations behind the `archproof` executable.  Each command
// takes an options struct and the streams to write to, and returns one of the
// shared exit codes, so tests can drive commands in-process and pin their
// byte-exact output.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace archproof::cli {

// Exit codes, shared by every command.
inline constexpr int kOk = 0;          // success / derivable / witnessed
inline constexpr int kNegative = 1;    // inconsistent / not derivable / refuted
inline constexpr int kInputError = 2;  // unreadable file, parse error, bad flags
inline constexpr int kExhausted = 3;   // budget exhausted / inconclusive

// Parse an architecture file and report the consistency verdict.
// Exit: 0 consistent, 1 violations (listed), 2 unreadable or unparsable.
struct CheckOptions {
  std::string path;
  bool json = false;
};
int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err);

// Decide a property query against an architecture.  With `params`
// ("key=value" pairs, keys n/N/Q/C/B), the architecture is regenerated from
// the built-in corpus entry named by the file's basename instead of being
// read from disk, since the parameters change the whole text.
// Exit: 0 derivable, 1 not derivable, 2 input error, 3 budget exhausted.
struct ProveOptions {
  std::string path;
  std::string query;
  std::optional<std::string> params;
  bool explain_proof = false;  // print the full derivation tree
  bool json = false;
};
int cmd_prove(const ProveOptions& opt, std::ostream& out, std::ostream& err);

// Execute the architecture.  With `eval_query`, evaluates the property
// against the covering trace plus sampled compatible traces; without it,
// prints the covering trace and the final state it reaches.
// Exit: 0 witnessed (or no query), 1 refuted, 2 input error, 3 inconclusive.
struct SimulateOptions {
  std::string path;
  std::optional<std::string> eval_query;
  std::optional<std::uint64_t> samples;  // default 1000 or ARCHPROOF_BUDGET
  std::uint64_t seed = 1;
  std::uint64_t max_len = 64;
  std::optional<std::string> params;
  bool json = false;
};
int cmd_simulate(const SimulateOptions& opt, std::ostream& out,
                 std::ostream& err);

// Regression report over the four verification architectures: which
// components can hold the reference and the fresh template, and whether the
// verifier's integrity fact is derivable, checked against the expected table.
// Exit: 0 all rows match, 1 any mismatch.
struct CorpusOptions {
  bool json = false;
};
int cmd_corpus(const CorpusOptions& opt, std::ostream& out, std::ostream& err);

// Run the counter attack and emit one CSV row per seed.
// Exit: 0 on success, 2 on invalid parameters.
struct AttackOptions {
  std::uint64_t n_rows = 8;
  std::uint64_t q_bits = 16;
  std::uint64_t c_nearest = 2;
  std::uint64_t budget = 512;
  std::uint64_t epoch_len = 0;  // re-randomize labels every this many queries; 0 = never
  std::optional<std::uint64_t> epochs;
  std::uint64_t seeds = 20;
  bool all_rows = false;  // alternative update rule: every row, every query
  bool json = false;
};
int cmd_attack(const AttackOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace archproof::cli
