// Surface syntax (`.parch` files): parser, pretty-printer, and the property
// query language.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "archproof/arch.hpp"

namespace archproof {

struct SourceSpan {
  std::size_t start = 0;  // byte offsets, start <= end
  std::size_t end = 0;
  std::size_t line = 1;    // 1-based, position of `start`
  std::size_t column = 1;  // 1-based byte column
};

class ParseError : public std::runtime_error {
public:
  ParseError(SourceSpan span, std::vector<std::string> expected, std::string found);

  const SourceSpan& span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

private:
  static std::string format(const SourceSpan& span,
                            const std::vector<std::string>& expected,
                            const std::string& found);
  SourceSpan span_;
  std::vector<std::string> expected_;
  std::string found_;
};

// Parses an architecture description.  `#` starts a line comment; keywords are
// case-sensitive and reserved; declarations must precede use.  Throws
// ParseError at the first failure.
Architecture parse_architecture(const std::string& text);

// Parses a property query: `has^2 T(ind)`, `hasnone S(br)`,
// `knows T (dec = Mu(br, bs, THR))`, conjunctions joined with `&`.  Bare
// names inside queries parse as variable references; resolve_property fixes
// them up against an architecture's declarations.
Property parse_query(const std::string& text);

// Reclassifies names in a parsed query using the architecture's declarations
// (names declared as constants become constant references).  Throws
// std::invalid_argument for forms that cannot be resolved: unknown names in
// `has`/`knows` parts, or a counted `has^n` on a constant.  `hasnone` parts
// tolerate unknown names — absence of something never mentioned is a
// well-posed (and derivable) judgement.
Property resolve_property(const Property& p, const Architecture& arch);

// Parses a standalone equation, e.g. "dec = Mu(br, bs, thr)".  As in queries,
// bare names parse as variable references.  Used by the proof text format.
Equation parse_equation_text(const std::string& text);

// Parses a standalone statement, e.g. "attest I {ebr = Enc(br)}" or
// "proof S {ind = HomMatch(sebr, qr); attest I {sebr = HomEnc(br)}}".  Bare
// names parse as variable references.  Used by the trace text format.
Statement parse_statement_text(const std::string& text);

// Parses a standalone term, e.g. "Mu(sbr[1], bs, THR)".  Bare names parse as
// variable references.  Used by the trace text format.
Term parse_term_text(const std::string& text);

// Reclassify names in standalone-parsed terms/equations/statements against an
// architecture's declarations, exactly as resolve_property does for queries.
// Throw std::invalid_argument on unknown names or functions.
Term resolve_term_names(const Term& t, const Architecture& arch);
Equation resolve_equation_names(const Equation& eq, const Architecture& arch);
Statement resolve_statement_names(const Statement& st, const Architecture& arch);

// Deterministic canonical rendering; parse_architecture(render(a)) is
// structurally equal to `a` for well-formed architectures.
std::string render(const Architecture& arch);

}  // namespace archproof
