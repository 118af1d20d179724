// Concrete model of the bounded-multiplicity side channel in a biometric
// identification module, and the counter-based recovery attack against it.
//
// The module stores N quantizations (Q-bit vectors) and answers a query with
// the indices of the C rows nearest in Hamming distance.  The attacker feeds
// uniform random queries, keeps an N x Q table of counters, updates the rows
// the module returned (+1 where the query bit is 1, -1 where it is 0), and
// finally guesses bit j of row i as 1 iff the counter is >= 0.
//
// Two counter-measures are modelled: answering with the whole database
// (C = N, which makes the answer carry no information) and re-randomizing the
// association between rows and reported labels every B queries.
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace archproof {

/// A row of bits; entries are 0 or 1.
using BitRow = std::vector<std::uint8_t>;

/// The module's stored quantizations plus the current association between
/// rows and the labels it reports.  `permutation[i]` is the label under which
/// row `i` is currently answered; it is a bijection on [0, N).
struct QuantDB {
  std::vector<BitRow> rows;
  std::vector<std::size_t> permutation;
};

/// N x Q counter table, all zeros at initialization.
struct CounterTable {
  std::vector<std::vector<long long>> t;

  CounterTable() = default;
  CounterTable(std::size_t n_rows, std::size_t q_bits)
      : t(n_rows, std::vector<long long>(q_bits, 0)) {}
};

/// Outcome of one attack run.  `guessed` is keyed by label: entry `lab` is
/// the attacker's reconstruction of the row currently answered as `lab`, and
/// `bit_accuracy` is the fraction of matching bits under that alignment.
struct AttackResult {
  std::vector<BitRow> guessed;
  std::uint64_t queries_used = 0;
  double bit_accuracy = 0.0;
};

/// Number of positions where `a` and `b` differ.  Throws std::invalid_argument
/// if the lengths differ.
std::size_t hamming_distance(const BitRow& a, const BitRow& b);

/// Fresh database of `n_rows` uniform random Q-bit rows with the identity
/// permutation, drawn from `rng`.  Throws std::invalid_argument if either
/// dimension is zero.
QuantDB make_random_db(std::size_t n_rows, std::size_t q_bits,
                       std::mt19937_64& rng);

/// Labels of the `c_nearest` rows minimizing Hamming distance to `query`,
/// ties broken by lowest row index, reported through the database's current
/// permutation.  Deterministic.  Throws std::invalid_argument if `c_nearest`
/// is 0 or exceeds the row count, or if `query` has the wrong width.
std::vector<std::size_t> module_answer(const QuantDB& db, const BitRow& query,
                                       std::size_t c_nearest);

/// Counter attack against a fixed association: draws `query_budget` uniform
/// random queries from a fresh generator seeded with `seed`, updates counters
/// for the labels the module returned, and guesses bit 1 where the counter is
/// >= 0 (ties guess 1 by convention).  Deterministic given `db` and `seed`.
///
/// `update_all_rows` switches to the reading in which every row's counters
/// are updated on every query regardless of the answer; the answer then
/// carries no information and accuracy stays near chance.  It exists so the
/// two readings of the update rule can be compared empirically.
AttackResult counter_attack(const QuantDB& db, std::size_t c_nearest,
                            std::uint64_t query_budget, std::uint64_t seed,
                            bool update_all_rows = false);

/// Counter attack against the re-randomizing counter-measure: the permutation
/// is freshly shuffled at the start of every epoch, each epoch answers
/// `queries_per_epoch` queries, counters are keyed by the observed labels,
/// and accuracy is evaluated against the final permutation.  `epochs` may be
/// zero (all-zero counters; the all-ones guess scores the fraction of 1 bits).
/// Throws std::invalid_argument if `queries_per_epoch` is zero.
AttackResult counter_attack_with_reset(QuantDB db, std::size_t c_nearest,
                                       std::uint64_t queries_per_epoch,
                                       std::uint64_t epochs,
                                       std::uint64_t seed);

/// Parameters of one seeded experiment: the database is generated from the
/// seed, then attacked with `query_budget` total queries.  A zero
/// `queries_per_epoch` means the association is never re-randomized;
/// otherwise the budget is split into `query_budget / queries_per_epoch`
/// epochs with a fresh permutation each.
struct ExperimentSpec {
  std::size_t n_rows = 8;
  std::size_t q_bits = 16;
  std::size_t c_nearest = 2;
  std::uint64_t query_budget = 512;
  std::uint64_t queries_per_epoch = 0;
  bool update_all_rows = false;
};

/// Runs one experiment: seeds a generator, draws the database from it, then
/// runs the attack with queries from the same stream.  Deterministic.
AttackResult run_attack_experiment(const ExperimentSpec& spec,
                                   std::uint64_t seed);

/// Median bit accuracy of `run_attack_experiment` over seeds 0 .. seeds-1.
/// Throws std::invalid_argument if `seeds` is zero.
double median_bit_accuracy(const ExperimentSpec& spec, std::size_t seeds);

/// One comma-separated result row: seed,N,Q,C,B,budget,accuracy with the
/// accuracy printed to four decimal places.
std::string experiment_csv_row(const ExperimentSpec& spec, std::uint64_t seed,
                               const AttackResult& result);

}  // namespace archproof
