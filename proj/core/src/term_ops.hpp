// Internal term utilities shared by the deductive engine and the trace-level
// knowledge closure: subterm collection, groundness, metavariable
// substitution and matching, and whole-subterm rewriting.  Not installed.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "archproof/arch.hpp"

namespace archproof::detail {

inline void collect_subterms(const Term& t, std::set<Term>& out) {
  out.insert(t);
  if (const auto* a = std::get_if<Apply>(&t.node))
    for (const Term& arg : a->args) collect_subterms(arg, out);
}

inline bool term_is_ground(const Term& t) {
  if (std::holds_alternative<MetaVar>(t.node)) return false;
  if (const auto* a = std::get_if<Apply>(&t.node)) {
    for (const Term& arg : a->args)
      if (!term_is_ground(arg)) return false;
  }
  return true;
}

inline Term subst_term(const Term& t, const std::map<std::string, Term>& sub) {
  if (const auto* m = std::get_if<MetaVar>(&t.node)) {
    auto it = sub.find(m->name);
    return it != sub.end() ? it->second : t;
  }
  if (const auto* a = std::get_if<Apply>(&t.node)) {
    Apply out{a->fn, {}};
    out.args.reserve(a->args.size());
    for (const Term& arg : a->args) out.args.push_back(subst_term(arg, sub));
    return Term(std::move(out));
  }
  return t;
}

inline Equation subst_equation(const Equation& e, const std::map<std::string, Term>& sub) {
  return Equation{e.pred, {subst_term(e.args[0], sub), subst_term(e.args[1], sub)}};
}

// Ground matching: metavariables bind to (ground) subterms of the candidate.
inline bool match_term(const Term& pat, const Term& ground,
                       std::map<std::string, Term>& sub) {
  if (const auto* m = std::get_if<MetaVar>(&pat.node)) {
    auto it = sub.find(m->name);
    if (it != sub.end()) return it->second == ground;
    if (!term_is_ground(ground)) return false;
    sub.emplace(m->name, ground);
    return true;
  }
  if (const auto* a = std::get_if<Apply>(&pat.node)) {
    const auto* g = std::get_if<Apply>(&ground.node);
    if (!g || g->fn != a->fn || g->args.size() != a->args.size()) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
      if (!match_term(a->args[i], g->args[i], sub)) return false;
    return true;
  }
  return pat == ground;
}

inline bool match_equation(const Equation& pat, const Equation& ground,
                           std::map<std::string, Term>& sub) {
  return pat.pred == ground.pred && match_term(pat.args[0], ground.args[0], sub) &&
         match_term(pat.args[1], ground.args[1], sub);
}

// Replace every occurrence of the whole term `from` with `to`.
inline Term rewrite_term(const Term& t, const Term& from, const Term& to) {
  if (t == from) return to;
  if (const auto* a = std::get_if<Apply>(&t.node)) {
    Apply out{a->fn, {}};
    out.args.reserve(a->args.size());
    for (const Term& arg : a->args) out.args.push_back(rewrite_term(arg, from, to));
    return Term(std::move(out));
  }
  return t;
}

// Every equation a statement carries, including claims of attestations nested
// inside proofs.
inline void collect_statement_equations(const Statement& st, std::vector<Equation>& out) {
  if (const auto* att = std::get_if<Attestation>(&st)) {
    out.insert(out.end(), att->claims.begin(), att->claims.end());
    return;
  }
  const auto& ps = std::get<ProofStatement>(st);
  for (const ProofPayloadItem& item : ps.payload) {
    if (const auto* e = std::get_if<Equation>(&item))
      out.push_back(*e);
    else
      for (const Equation& c : std::get<Attestation>(item).claims) out.push_back(c);
  }
}

}  // namespace archproof::detail
