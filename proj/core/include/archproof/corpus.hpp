// Built-in corpus: the biometric-verification reference architectures used
// throughout the tests, benchmarks, and the `corpus` command.
#pragma once

#include <string>
#include <vector>

#include "archproof/arch.hpp"

namespace archproof {

// Parameters of the bounded identification family.  `n` is the uniform finite
// bound carried by the bounded primitives, `N` the database size, `Q` the
// quantization width, `C` the number of indices fetched per query, and `B`
// the reduced bound used by the blocking and reset variants.
struct CorpusParams {
  std::uint64_t n = 32;
  std::uint64_t N = 4;
  std::uint64_t Q = 8;
  std::uint64_t C = 2;
  std::uint64_t B = 5;
};

// Canonical corpus order: "ed", "hsm", "hom", "moc", "mi", "mi-e", "mi-e1",
// "mi-e2", "mi-e3".
std::vector<std::string> corpus_names();

// Instantiates a corpus architecture by name.  Parameters affect only the
// identification ("mi*") family.  Throws std::out_of_range on unknown names.
Architecture instantiate_corpus(const std::string& name,
                                const CorpusParams& params = {});

}  // namespace archproof
