#include "archproof/leakage.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace archproof {

namespace {

std::uint8_t random_bit(std::mt19937_64& rng) {
  return static_cast<std::uint8_t>(rng() & 1u);
}

BitRow random_row(std::mt19937_64& rng, std::size_t q_bits) {
  BitRow row(q_bits);
  for (auto& bit : row) bit = random_bit(rng);
  return row;
}

void check_db(const QuantDB& db, std::size_t c_nearest) {
  if (db.rows.empty()) throw std::invalid_argument("database has no rows");
  if (c_nearest == 0 || c_nearest > db.rows.size())
    throw std::invalid_argument("answer size must be between 1 and the row count");
  if (db.permutation.size() != db.rows.size())
    throw std::invalid_argument("permutation size does not match the row count");
}

void add_query(CounterTable& table, std::size_t label, const BitRow& query) {
  auto& row = table.t[label];
  for (std::size_t j = 0; j < query.size(); ++j)
    row[j] += query[j] ? 1 : -1;
}

std::vector<BitRow> sign_guess(const CounterTable& table) {
  std::vector<BitRow> guess;
  guess.reserve(table.t.size());
  for (const auto& row : table.t) {
    BitRow bits(row.size());
    for (std::size_t j = 0; j < row.size(); ++j)
      bits[j] = row[j] >= 0 ? 1 : 0;
    guess.push_back(std::move(bits));
  }
  return guess;
}

// Fraction of bits where the guess for each label matches the row answered
// under that label by `db`'s current permutation.
double labelled_accuracy(const QuantDB& db,
                         const std::vector<BitRow>& guess_by_label) {
  std::vector<std::size_t> row_of_label(db.rows.size());
  for (std::size_t i = 0; i < db.permutation.size(); ++i)
    row_of_label[db.permutation[i]] = i;
  std::size_t good = 0;
  std::size_t total = 0;
  for (std::size_t lab = 0; lab < guess_by_label.size(); ++lab) {
    const BitRow& truth = db.rows[row_of_label[lab]];
    const BitRow& guess = guess_by_label[lab];
    for (std::size_t j = 0; j < truth.size(); ++j) {
      good += guess[j] == truth[j];
      ++total;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(good) / static_cast<double>(total);
}

AttackResult attack_run(const QuantDB& db, std::size_t c_nearest,
                        std::uint64_t query_budget, std::mt19937_64& rng,
                        bool update_all_rows) {
  check_db(db, c_nearest);
  const std::size_t q_bits = db.rows.front().size();
  CounterTable table(db.rows.size(), q_bits);
  for (std::uint64_t k = 0; k < query_budget; ++k) {
    BitRow query = random_row(rng, q_bits);
    if (update_all_rows) {
      for (std::size_t lab = 0; lab < db.rows.size(); ++lab)
        add_query(table, lab, query);
    } else {
      for (std::size_t lab : module_answer(db, query, c_nearest))
        add_query(table, lab, query);
    }
  }
  AttackResult result;
  result.guessed = sign_guess(table);
  result.queries_used = query_budget;
  result.bit_accuracy = labelled_accuracy(db, result.guessed);
  return result;
}

AttackResult attack_run_reset(QuantDB& db, std::size_t c_nearest,
                              std::uint64_t queries_per_epoch,
                              std::uint64_t epochs, std::mt19937_64& rng) {
  check_db(db, c_nearest);
  if (queries_per_epoch == 0)
    throw std::invalid_argument("epoch length must be at least 1");
  const std::size_t q_bits = db.rows.front().size();
  CounterTable table(db.rows.size(), q_bits);
  for (std::uint64_t e = 0; e < epochs; ++e) {
    // Fisher-Yates with rng() % n so runs reproduce across standard-library
    // implementations (std::shuffle's draw sequence is implementation-defined).
    for (std::size_t i = db.permutation.size() - 1; i > 0; --i)
      std::swap(db.permutation[i], db.permutation[rng() % (i + 1)]);
    for (std::uint64_t k = 0; k < queries_per_epoch; ++k) {
      BitRow query = random_row(rng, q_bits);
      for (std::size_t lab : module_answer(db, query, c_nearest))
        add_query(table, lab, query);
    }
  }
  AttackResult result;
  result.guessed = sign_guess(table);
  result.queries_used = queries_per_epoch * epochs;
  result.bit_accuracy = labelled_accuracy(db, result.guessed);
  return result;
}

}  // namespace

std::size_t hamming_distance(const BitRow& a, const BitRow& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("hamming distance of rows with different widths");
  std::size_t d = 0;
  for (std::size_t j = 0; j < a.size(); ++j) d += a[j] != b[j];
  return d;
}

QuantDB make_random_db(std::size_t n_rows, std::size_t q_bits,
                       std::mt19937_64& rng) {
  if (n_rows == 0 || q_bits == 0)
    throw std::invalid_argument("database dimensions must be at least 1");
  QuantDB db;
  db.rows.reserve(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i)
    db.rows.push_back(random_row(rng, q_bits));
  db.permutation.resize(n_rows);
  std::iota(db.permutation.begin(), db.permutation.end(), std::size_t{0});
  return db;
}

std::vector<std::size_t> module_answer(const QuantDB& db, const BitRow& query,
                                       std::size_t c_nearest) {
  check_db(db, c_nearest);
  std::vector<std::pair<std::size_t, std::size_t>> ranked;
  ranked.reserve(db.rows.size());
  for (std::size_t i = 0; i < db.rows.size(); ++i)
    ranked.emplace_back(hamming_distance(db.rows[i], query), i);
  std::sort(ranked.begin(), ranked.end());
  std::vector<std::size_t> labels;
  labels.reserve(c_nearest);
  for (std::size_t k = 0; k < c_nearest; ++k)
    labels.push_back(db.permutation[ranked[k].second]);
  return labels;
}

AttackResult counter_attack(const QuantDB& db, std::size_t c_nearest,
                            std::uint64_t query_budget, std::uint64_t seed,
                            bool update_all_rows) {
  std::mt19937_64 rng(seed);
  return attack_run(db, c_nearest, query_budget, rng, update_all_rows);
}

AttackResult counter_attack_with_reset(QuantDB db, std::size_t c_nearest,
                                       std::uint64_t queries_per_epoch,
                                       std::uint64_t epochs,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return attack_run_reset(db, c_nearest, queries_per_epoch, epochs, rng);
}

AttackResult run_attack_experiment(const ExperimentSpec& spec,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  QuantDB db = make_random_db(spec.n_rows, spec.q_bits, rng);
  if (spec.queries_per_epoch == 0)
    return attack_run(db, spec.c_nearest, spec.query_budget, rng,
                      spec.update_all_rows);
  if (spec.update_all_rows)
    throw std::invalid_argument(
        "the all-rows update reading is only modelled without re-randomization");
  const std::uint64_t epochs = spec.query_budget / spec.queries_per_epoch;
  return attack_run_reset(db, spec.c_nearest, spec.queries_per_epoch, epochs,
                          rng);
}

double median_bit_accuracy(const ExperimentSpec& spec, std::size_t seeds) {
  if (seeds == 0) throw std::invalid_argument("need at least one seed");
  std::vector<double> acc;
  acc.reserve(seeds);
  for (std::size_t s = 0; s < seeds; ++s)
    acc.push_back(run_attack_experiment(spec, s).bit_accuracy);
  std::sort(acc.begin(), acc.end());
  if (seeds % 2 == 1) return acc[seeds / 2];
  return (acc[seeds / 2 - 1] + acc[seeds / 2]) / 2.0;
}

std::string experiment_csv_row(const ExperimentSpec& spec, std::uint64_t seed,
                               const AttackResult& result) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%llu,%zu,%zu,%zu,%llu,%llu,%.4f",
                static_cast<unsigned long long>(seed), spec.n_rows,
                spec.q_bits, spec.c_nearest,
                static_cast<unsigned long long>(spec.queries_per_epoch),
                static_cast<unsigned long long>(result.queries_used),
                result.bit_accuracy);
  return buf;
}

}  // namespace archproof
