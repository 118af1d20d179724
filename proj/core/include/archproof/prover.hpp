#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "archproof/arch.hpp"

namespace archproof {

// ---------------------------------------------------------------------------
// Facts
//
// Saturation derives two kinds of positive facts:
//   * possession facts  Has_i(X^(n)) / Has_i(c)   ("component i can obtain n
//     values of X in one session" / "i can obtain the constant c"), and
//   * knowledge facts   K_i(Eq)                    ("i can establish Eq").
// Absence facts (HasNone) are established by failure: a variable/constant for
// which not even a single value is obtainable after full saturation.
// ---------------------------------------------------------------------------

inline constexpr std::size_t kNoCite = static_cast<std::size_t>(-1);

struct HasFact {
  ComponentId comp;
  std::string subject;
  bool is_const = false;
  Multiplicity count = Multiplicity::infinite();  // meaningful for variables

  int compare(const HasFact& o) const;
  bool operator==(const HasFact& o) const { return compare(o) == 0; }
  bool operator<(const HasFact& o) const { return compare(o) < 0; }
};

struct HasNoneFact {
  ComponentId comp;
  std::string subject;
  bool is_const = false;

  int compare(const HasNoneFact& o) const;
  bool operator==(const HasNoneFact& o) const { return compare(o) == 0; }
  bool operator<(const HasNoneFact& o) const { return compare(o) < 0; }
};

struct KnowFact {
  ComponentId comp;
  Equation eq;

  int compare(const KnowFact& o) const;
  bool operator==(const KnowFact& o) const { return compare(o) == 0; }
  bool operator<(const KnowFact& o) const { return compare(o) < 0; }
};

// Rendered forms (also the proof-text conclusion syntax):
//   has^3 T(ind)   has^inf T(ebr)       -- variable possession (count always shown)
//   has M(THR)                          -- constant possession (never a count)
//   hasnone S(br)
//   knows T (dec = Mu(br, bs, thr))
std::string to_string(const HasFact& f);
std::string to_string(const HasNoneFact& f);
std::string to_string(const KnowFact& f);

// ---------------------------------------------------------------------------
// Proof trees
// ---------------------------------------------------------------------------

// A node concludes a fact, or (for the conjunction rules K-AND / I-AND) a
// compound property.
using ProofConclusion = std::variant<HasFact, HasNoneFact, KnowFact, Property>;

std::string to_string(const ProofConclusion& c);

struct ProofNode {
  // One of: H1 H1' H2 H2' H3 H4 H5 H5' HN HN' K1 K3 K4 K5 K-DED K-AND I-AND
  // EQ-SYM EQ-TRANS EQ-SUBST.
  std::string rule;
  ProofConclusion conclusion;
  std::vector<ProofNode> children;  // sub-derivations, in premise order
  // Architecture objects the step cites (rendered primitives, dependence
  // entries, deductive rules) or, for HN/HN', the saturated-base digest.
  // Informational: regenerated by the prover, ignored by validate_proof.
  std::vector<std::string> cites;
};

// Stable text form, one node per line (pre-order):
//   <rule> TAB <conclusion> TAB <child count>
std::string serialize_proof(const ProofNode& tree);
// Inverse of serialize_proof (cites are not part of the text form and come
// back empty). Throws std::invalid_argument on malformed input.
ProofNode parse_proof(const std::string& text);

// ---------------------------------------------------------------------------
// Saturated fact base
// ---------------------------------------------------------------------------

struct SaturationStats {
  std::size_t has_facts = 0;
  std::size_t know_facts = 0;
  std::size_t iterations = 0;  // knowledge-closure rounds until fixpoint
  std::size_t universe_size = 0;
};

// How a fact entered the base (enough to rebuild a full proof tree).
struct HasProv {
  std::string rule;             // H1 H1' H2 H2' H3 H5 H5'
  std::size_t cite = kNoCite;   // primitive index, or dependence index for H5/H5'
};

struct KnowProv {
  std::string rule;             // K1 K3 K4 K5 K-DED EQ-SYM EQ-TRANS EQ-SUBST
  std::size_t cite = kNoCite;   // primitive index (K1..K5) or rule index (K-DED)
  std::size_t cite2 = kNoCite;  // trust-primitive index for K4/K5
  std::vector<Equation> premises;  // earlier-derived equations of the same component
};

struct HasEntry {
  Multiplicity count = Multiplicity::infinite();  // the recorded maximum
  HasProv prov;
};

class Saturator;

class FactBase {
 public:
  // Possession: recorded maximum for (component, variable), or nullopt.
  std::optional<Multiplicity> var_count(const ComponentId& comp,
                                        const std::string& var) const;
  bool has_const(const ComponentId& comp, const std::string& konst) const;
  bool knows(const ComponentId& comp, const Equation& eq) const;

  const std::map<ComponentId, std::map<std::string, HasEntry>>& var_facts() const {
    return vars_;
  }
  const std::map<ComponentId, std::map<std::string, HasEntry>>& const_facts() const {
    return consts_;
  }
  const std::map<ComponentId, std::map<Equation, KnowProv>>& know_facts() const {
    return know_;
  }
  const std::set<Term>& universe() const { return universe_; }
  const SaturationStats& stats() const { return stats_; }

  // Order-independent digest of the possession facts; cited by HN/HN' proof
  // nodes as a fingerprint of the completed (failed) search.
  std::string digest() const;

 private:
  friend class Saturator;
  std::map<ComponentId, std::map<std::string, HasEntry>> vars_;
  std::map<ComponentId, std::map<std::string, HasEntry>> consts_;
  std::map<ComponentId, std::map<Equation, KnowProv>> know_;
  std::set<Term> universe_;
  SaturationStats stats_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Runs possession and knowledge closure to fixpoint. The knowledge closure is
// confined to the architecture's term universe plus `extra_universe` (derive()
// passes the query's subterms). Requires a consistent architecture; throws
// std::invalid_argument otherwise and std::runtime_error if the round budget
// is exhausted before a fixpoint (cannot happen for universe-confined rules;
// kept as a hard backstop).  The environment variable ARCHPROOF_BUDGET, when
// set to a positive integer, overrides the computed round cap.
FactBase saturate(const Architecture& arch);
FactBase saturate(const Architecture& arch,
                  const std::vector<Term>& extra_universe);

struct Verdict {
  bool derivable = false;
  // Present exactly when derivable. HasNone conclusions carry a one-node
  // HN/HN' proof citing the saturated-base digest.
  std::optional<ProofNode> proof;
  SaturationStats stats;
  std::string query;  // rendered, resolved query (used by explain)
};

// Decides a property against the architecture. The query may use undeclared
// spelling for constants (bare names are reclassified against the
// declarations); unknown names make the call throw std::invalid_argument.
Verdict derive(const Architecture& arch, const Property& query);

// Independent re-check of a proof tree: every node must be a correct rule
// application over this architecture (leaf citations are re-searched, not
// trusted). HN/HN' nodes re-run possession saturation and re-verify absence.
bool validate_proof(const Architecture& arch, const ProofNode& tree);

// Deterministic, human-readable account of a verdict. Positive verdicts are
// rendered as an indented derivation with premises above their conclusion, so
// reading top to bottom follows the order in which facts are established.
std::string explain(const Verdict& v);

}  // namespace archproof
