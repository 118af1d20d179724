// Deductive engine: possession/knowledge saturation with provenance, verdict
// construction with reconstructed proof trees, independent proof validation,
// and deterministic explanations.
#include "archproof/prover.hpp"

#include <cstdint>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "archproof/dsl.hpp"
#include "term_ops.hpp"

namespace archproof {

namespace {

int cmp_u64(std::uint64_t a, std::uint64_t b) { return a < b ? -1 : a > b ? 1 : 0; }
int cmp_str(const std::string& a, const std::string& b) {
  int c = a.compare(b);
  return c < 0 ? -1 : c > 0 ? 1 : 0;
}
int cmp_bool(bool a, bool b) { return (a ? 1 : 0) - (b ? 1 : 0); }
int cmp_mult(const Multiplicity& a, const Multiplicity& b) {
  if (a == b) return 0;
  return a < b ? -1 : 1;
}

// Shared term utilities (matching, substitution, rewriting).
using detail::collect_statement_equations;
using detail::collect_subterms;
using detail::match_equation;
using detail::match_term;
using detail::rewrite_term;
using detail::subst_equation;
using detail::subst_term;
using detail::term_is_ground;

std::string join_strings(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

// --- facts ------------------------------------------------------------------

int HasFact::compare(const HasFact& o) const {
  if (int c = cmp_str(comp, o.comp)) return c;
  if (int c = cmp_str(subject, o.subject)) return c;
  if (int c = cmp_bool(is_const, o.is_const)) return c;
  return cmp_mult(count, o.count);
}

int HasNoneFact::compare(const HasNoneFact& o) const {
  if (int c = cmp_str(comp, o.comp)) return c;
  if (int c = cmp_str(subject, o.subject)) return c;
  return cmp_bool(is_const, o.is_const);
}

int KnowFact::compare(const KnowFact& o) const {
  if (int c = cmp_str(comp, o.comp)) return c;
  return archproof::compare(eq, o.eq);
}

std::string to_string(const HasFact& f) {
  if (f.is_const) return "has " + f.comp + "(" + f.subject + ")";
  return "has^" + f.count.to_string() + " " + f.comp + "(" + f.subject + ")";
}

std::string to_string(const HasNoneFact& f) {
  return "hasnone " + f.comp + "(" + f.subject + ")";
}

std::string to_string(const KnowFact& f) {
  return "knows " + f.comp + " (" + to_string(f.eq) + ")";
}

std::string to_string(const ProofConclusion& c) {
  if (const auto* h = std::get_if<HasFact>(&c)) return to_string(*h);
  if (const auto* n = std::get_if<HasNoneFact>(&c)) return to_string(*n);
  if (const auto* k = std::get_if<KnowFact>(&c)) return to_string(*k);
  return to_string(std::get<Property>(c));
}

// --- fact base --------------------------------------------------------------

std::optional<Multiplicity> FactBase::var_count(const ComponentId& comp,
                                                const std::string& var) const {
  auto ci = vars_.find(comp);
  if (ci == vars_.end()) return std::nullopt;
  auto vi = ci->second.find(var);
  if (vi == ci->second.end()) return std::nullopt;
  return vi->second.count;
}

bool FactBase::has_const(const ComponentId& comp, const std::string& konst) const {
  auto ci = consts_.find(comp);
  return ci != consts_.end() && ci->second.count(konst) > 0;
}

bool FactBase::knows(const ComponentId& comp, const Equation& eq) const {
  auto ci = know_.find(comp);
  return ci != know_.end() && ci->second.count(eq) > 0;
}

std::string FactBase::digest() const {
  std::string data;
  for (const auto& [comp, facts] : vars_)
    for (const auto& [var, entry] : facts)
      data += "v|" + comp + "|" + var + "|" + entry.count.to_string() + "\n";
  for (const auto& [comp, facts] : consts_)
    for (const auto& [konst, entry] : facts) data += "c|" + comp + "|" + konst + "\n";
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
  for (unsigned char b : data) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

// --- saturation -------------------------------------------------------------

class Saturator {
 public:
  Saturator(const Architecture& arch, const std::vector<Term>& extra_universe)
      : arch_(arch), extra_(extra_universe) {}

  FactBase run() {
    ConsistencyReport report = check_consistency(arch_);
    if (!report.consistent())
      throw std::invalid_argument("inconsistent architecture: " +
                                  report.violations.front().message);
    index_trust();
    possession_generators();
    possession_fixpoint();
    collect_universe();
    knowledge_generators();
    knowledge_fixpoint();
    finish_stats();
    return std::move(fb_);
  }

 private:
  // possession ---------------------------------------------------------------

  bool add_var_fact(const ComponentId& comp, const std::string& var,
                    Multiplicity count, HasProv prov) {
    auto& entry = fb_.vars_[comp];
    auto it = entry.find(var);
    if (it == entry.end()) {
      entry.emplace(var, HasEntry{count, std::move(prov)});
      return true;
    }
    if (it->second.count < count) {
      it->second = HasEntry{count, std::move(prov)};
      return true;
    }
    return false;
  }

  bool add_const_fact(const ComponentId& comp, const std::string& konst, HasProv prov) {
    auto& entry = fb_.consts_[comp];
    if (entry.count(konst)) return false;
    entry.emplace(konst, HasEntry{Multiplicity::infinite(), std::move(prov)});
    return true;
  }

  void possession_generators() {
    for (std::size_t i = 0; i < arch_.primitives.size(); ++i) {
      const Primitive& p = arch_.primitives[i];
      if (const auto* h = std::get_if<HasVarPrim>(&p)) {
        add_var_fact(h->comp, h->var, h->mult, HasProv{"H1", i});
      } else if (const auto* hc = std::get_if<HasConstPrim>(&p)) {
        add_const_fact(hc->comp, hc->konst, HasProv{"H1'", i});
      } else if (const auto* r = std::get_if<ReceivePrim>(&p)) {
        for (const Item& it : r->items) {
          if (item_is_const(it))
            add_const_fact(r->dst, item_name(it), HasProv{"H2'", i});
          else
            add_var_fact(r->dst, item_name(it), r->mult, HasProv{"H2", i});
        }
      } else if (const auto* c = std::get_if<ComputePrim>(&p)) {
        for (const ComponentId& member : c->group)
          add_var_fact(member, c->target, c->mult, HasProv{"H3", i});
      }
    }
  }

  bool dep_satisfied(const DepEntry& d) const {
    for (const DepPremise& pr : d.premises) {
      if (pr.is_const) {
        if (!fb_.has_const(d.owner, pr.subject)) return false;
      } else {
        std::optional<Multiplicity> have = fb_.var_count(d.owner, pr.subject);
        if (!have || !have->covers(pr.need)) return false;
      }
    }
    return true;
  }

  void possession_fixpoint() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < arch_.deps.size(); ++i) {
        const DepEntry& d = arch_.deps[i];
        if (!dep_satisfied(d)) continue;
        bool added = d.target_is_const
                         ? add_const_fact(d.owner, d.target, HasProv{"H5'", i})
                         : add_var_fact(d.owner, d.target, Multiplicity::finite(1),
                                        HasProv{"H5", i});
        if (added) changed = true;
      }
    }
  }

  // knowledge ----------------------------------------------------------------

  void index_trust() {
    for (std::size_t i = 0; i < arch_.primitives.size(); ++i)
      if (const auto* t = std::get_if<TrustPrim>(&arch_.primitives[i]))
        trust_.emplace(std::make_pair(t->truster, t->trustee), i);
  }

  bool trusted(const ComponentId& truster, const ComponentId& trustee,
               std::size_t& out_index) const {
    auto it = trust_.find(std::make_pair(truster, trustee));
    if (it == trust_.end()) return false;
    out_index = it->second;
    return true;
  }

  void add_universe_term(const Term& t) {
    if (term_is_ground(t)) collect_subterms(t, fb_.universe_);
  }

  void add_universe_equation(const Equation& e) {
    add_universe_term(e.args[0]);
    add_universe_term(e.args[1]);
  }

  void collect_universe() {
    for (const Primitive& p : arch_.primitives) {
      if (const auto* h = std::get_if<HasVarPrim>(&p)) {
        add_universe_term(Term::var(h->var));
      } else if (const auto* hc = std::get_if<HasConstPrim>(&p)) {
        add_universe_term(Term::constant(hc->konst));
      } else if (const auto* r = std::get_if<ReceivePrim>(&p)) {
        for (const Item& it : r->items)
          add_universe_term(item_is_const(it) ? Term::constant(item_name(it))
                                              : Term::var(item_name(it)));
        std::vector<Equation> eqs;
        for (const Statement& st : r->statements) collect_statement_equations(st, eqs);
        for (const Equation& e : eqs) add_universe_equation(e);
      } else if (const auto* c = std::get_if<ComputePrim>(&p)) {
        add_universe_term(Term::var(c->target));
        add_universe_term(c->rhs);
      } else if (const auto* v = std::get_if<VerifyPrim>(&p)) {
        std::vector<Equation> eqs;
        collect_statement_equations(v->statement, eqs);
        for (const Equation& e : eqs) add_universe_equation(e);
      }
    }
    for (const DepEntry& d : arch_.deps) {
      add_universe_term(d.target_is_const ? Term::constant(d.target)
                                          : Term::var(d.target));
      for (const DepPremise& pr : d.premises)
        add_universe_term(pr.is_const ? Term::constant(pr.subject)
                                      : Term::var(pr.subject));
    }
    for (const DeductiveRule& r : arch_.rules) {
      for (const Equation& e : r.premises) add_universe_equation(e);
      add_universe_equation(r.conclusion);
    }
    for (const Equation& e : arch_.functionality) add_universe_equation(e);
    for (const Term& t : extra_) add_universe_term(t);
  }

  bool term_in_universe(const Term& t) const {
    if (!fb_.universe_.count(t)) return false;
    if (const auto* a = std::get_if<Apply>(&t.node))
      for (const Term& arg : a->args)
        if (!term_in_universe(arg)) return false;
    return true;
  }

  bool equation_in_universe(const Equation& e) const {
    return term_in_universe(e.args[0]) && term_in_universe(e.args[1]);
  }

  bool add_know(const ComponentId& comp, const Equation& eq, KnowProv prov) {
    auto& entry = fb_.know_[comp];
    if (entry.count(eq)) return false;
    entry.emplace(eq, std::move(prov));
    return true;
  }

  void knowledge_generators() {
    for (std::size_t i = 0; i < arch_.primitives.size(); ++i) {
      const Primitive& p = arch_.primitives[i];
      if (const auto* c = std::get_if<ComputePrim>(&p)) {
        Equation e = Equation::equal(Term::var(c->target), c->rhs);
        for (const ComponentId& member : c->group)
          add_know(member, e, KnowProv{"K1", i, kNoCite, {}});
      } else if (const auto* v = std::get_if<VerifyPrim>(&p)) {
        std::size_t tidx = kNoCite;
        if (const auto* att = std::get_if<Attestation>(&v->statement)) {
          if (trusted(v->comp, att->issuer, tidx))
            for (const Equation& claim : att->claims)
              add_know(v->comp, claim, KnowProv{"K5", i, tidx, {}});
        } else {
          const auto& ps = std::get<ProofStatement>(v->statement);
          for (const ProofPayloadItem& item : ps.payload) {
            if (const auto* e = std::get_if<Equation>(&item)) {
              add_know(v->comp, *e, KnowProv{"K3", i, kNoCite, {}});
            } else {
              const auto& att = std::get<Attestation>(item);
              if (trusted(v->comp, att.issuer, tidx))
                for (const Equation& claim : att.claims)
                  add_know(v->comp, claim, KnowProv{"K4", i, tidx, {}});
            }
          }
        }
      }
    }
  }

  const std::map<Equation, KnowProv>& know_of(const ComponentId& comp) const {
    static const std::map<Equation, KnowProv> empty;
    auto it = fb_.know_.find(comp);
    return it == fb_.know_.end() ? empty : it->second;
  }

  std::vector<std::pair<ComponentId, Equation>> know_snapshot() const {
    std::vector<std::pair<ComponentId, Equation>> out;
    for (const auto& [comp, eqs] : fb_.know_)
      for (const auto& [eq, prov] : eqs) out.emplace_back(comp, eq);
    return out;
  }

  // User-supplied rules under ground matching.
  bool deduction_pass() {
    bool changed = false;
    for (std::size_t ri = 0; ri < arch_.rules.size(); ++ri) {
      const DeductiveRule& rule = arch_.rules[ri];
      std::vector<ComponentId> targets =
          rule.owner ? std::vector<ComponentId>{*rule.owner} : arch_.components;
      for (const ComponentId& comp : targets) {
        std::vector<Equation> candidates;
        for (const auto& [eq, prov] : know_of(comp)) candidates.push_back(eq);
        std::map<std::string, Term> sub;
        std::vector<Equation> instantiated;
        changed |= apply_rule(comp, rule, ri, 0, sub, instantiated, candidates);
      }
    }
    return changed;
  }

  bool apply_rule(const ComponentId& comp, const DeductiveRule& rule, std::size_t ri,
                  std::size_t idx, std::map<std::string, Term>& sub,
                  std::vector<Equation>& instantiated,
                  const std::vector<Equation>& candidates) {
    if (idx == rule.premises.size()) {
      Equation concl = subst_equation(rule.conclusion, sub);
      if (!term_is_ground(concl.args[0]) || !term_is_ground(concl.args[1])) return false;
      if (!equation_in_universe(concl)) return false;
      return add_know(comp, concl, KnowProv{"K-DED", ri, kNoCite, instantiated});
    }
    Equation pat = subst_equation(rule.premises[idx], sub);
    if (term_is_ground(pat.args[0]) && term_is_ground(pat.args[1])) {
      if (!know_of(comp).count(pat)) return false;
      instantiated.push_back(pat);
      bool changed = apply_rule(comp, rule, ri, idx + 1, sub, instantiated, candidates);
      instantiated.pop_back();
      return changed;
    }
    bool changed = false;
    for (const Equation& cand : candidates) {
      std::map<std::string, Term> extended = sub;
      if (!match_equation(pat, cand, extended)) continue;
      instantiated.push_back(cand);
      changed |= apply_rule(comp, rule, ri, idx + 1, extended, instantiated, candidates);
      instantiated.pop_back();
    }
    return changed;
  }

  bool symmetry_pass() {
    bool changed = false;
    for (const auto& [comp, eq] : know_snapshot()) {
      if (eq.pred != Pred::eq) continue;
      Equation rev = Equation::equal(eq.args[1], eq.args[0]);
      changed |= add_know(comp, rev, KnowProv{"EQ-SYM", kNoCite, kNoCite, {eq}});
    }
    return changed;
  }

  bool transitivity_pass() {
    bool changed = false;
    std::map<std::pair<ComponentId, Term>, std::vector<Equation>> by_lhs;
    for (const auto& [comp, eqs] : fb_.know_)
      for (const auto& [eq, prov] : eqs)
        if (eq.pred == Pred::eq)
          by_lhs[std::make_pair(comp, eq.args[0])].push_back(eq);
    for (const auto& [comp, eq] : know_snapshot()) {
      if (eq.pred != Pred::eq) continue;
      auto it = by_lhs.find(std::make_pair(comp, eq.args[1]));
      if (it == by_lhs.end()) continue;
      for (const Equation& next : it->second) {
        if (next.args[1] == eq.args[0]) continue;  // skip deriving x = x
        Equation joined = Equation::equal(eq.args[0], next.args[1]);
        changed |=
            add_know(comp, joined, KnowProv{"EQ-TRANS", kNoCite, kNoCite, {eq, next}});
      }
    }
    return changed;
  }

  bool substitution_pass() {
    bool changed = false;
    std::vector<std::pair<ComponentId, Equation>> snapshot = know_snapshot();
    for (const auto& [comp, eq] : snapshot) {
      if (eq.pred != Pred::eq) continue;
      const Term& from = eq.args[0];
      const Term& to = eq.args[1];
      if (from == to) continue;
      if (!fb_.universe_.count(from) || !fb_.universe_.count(to)) continue;
      for (const auto& [comp2, target] : snapshot) {
        if (comp2 != comp) continue;
        Equation rewritten{target.pred,
                           {rewrite_term(target.args[0], from, to),
                            rewrite_term(target.args[1], from, to)}};
        if (rewritten == target) continue;
        if (!equation_in_universe(rewritten)) continue;
        changed |= add_know(comp, rewritten,
                            KnowProv{"EQ-SUBST", kNoCite, kNoCite, {eq, target}});
      }
    }
    return changed;
  }

  void knowledge_fixpoint() {
    // Every round either adds a fact or terminates, and all facts live inside
    // the term universe, so rounds are bounded; the cap is a hard backstop.
    std::size_t universe = fb_.universe_.size();
    std::size_t cap = 4 + arch_.components.size() * (universe * universe * 2 + 1);
    if (const char* env = std::getenv("ARCHPROOF_BUDGET")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && v > 0)
        cap = static_cast<std::size_t>(v);
    }
    bool changed = true;
    while (changed) {
      ++fb_.stats_.iterations;
      if (fb_.stats_.iterations > cap)
        throw std::runtime_error(
            "saturation budget exceeded: knowledge closure failed to reach a "
            "fixpoint within " +
            std::to_string(cap) + " rounds");
      changed = false;
      if (deduction_pass()) changed = true;
      if (symmetry_pass()) changed = true;
      if (transitivity_pass()) changed = true;
      if (substitution_pass()) changed = true;
    }
  }

  void finish_stats() {
    fb_.stats_.universe_size = fb_.universe_.size();
    fb_.stats_.has_facts = 0;
    for (const auto& [comp, facts] : fb_.vars_) fb_.stats_.has_facts += facts.size();
    for (const auto& [comp, facts] : fb_.consts_) fb_.stats_.has_facts += facts.size();
    fb_.stats_.know_facts = 0;
    for (const auto& [comp, eqs] : fb_.know_) fb_.stats_.know_facts += eqs.size();
  }

  const Architecture& arch_;
  const std::vector<Term>& extra_;
  FactBase fb_;
  std::map<std::pair<ComponentId, ComponentId>, std::size_t> trust_;
};

FactBase saturate(const Architecture& arch) {
  return saturate(arch, std::vector<Term>{});
}

FactBase saturate(const Architecture& arch, const std::vector<Term>& extra_universe) {
  return Saturator(arch, extra_universe).run();
}

// --- proof reconstruction ---------------------------------------------------

namespace {

ProofNode build_has_node(const Architecture& arch, const FactBase& fb,
                         const ComponentId& comp, const std::string& subject,
                         bool is_const, std::optional<Multiplicity> want) {
  const auto& table = is_const ? fb.const_facts() : fb.var_facts();
  const HasEntry& entry = table.at(comp).at(subject);
  ProofNode node;
  node.rule = entry.prov.rule;
  node.conclusion = HasFact{comp, subject, is_const,
                            is_const ? Multiplicity::infinite() : entry.count};
  if (node.rule == "H5" || node.rule == "H5'") {
    const DepEntry& dep = arch.deps.at(entry.prov.cite);
    node.cites.push_back(to_string(dep));
    for (const DepPremise& pr : dep.premises)
      node.children.push_back(build_has_node(
          arch, fb, comp, pr.subject, pr.is_const,
          pr.is_const ? std::nullopt : std::optional<Multiplicity>(pr.need)));
  } else {
    node.cites.push_back(to_string(arch.primitives.at(entry.prov.cite)));
  }
  if (!is_const && want && !(*want == entry.count)) {
    ProofNode narrowed;  // downward closure: reuse the stored maximum
    narrowed.rule = "H4";
    narrowed.conclusion = HasFact{comp, subject, false, *want};
    narrowed.children.push_back(std::move(node));
    return narrowed;
  }
  return node;
}

ProofNode build_know_node(const Architecture& arch, const FactBase& fb,
                          const ComponentId& comp, const Equation& eq) {
  const KnowProv& prov = fb.know_facts().at(comp).at(eq);
  ProofNode node;
  node.rule = prov.rule;
  node.conclusion = KnowFact{comp, eq};
  for (const Equation& premise : prov.premises)
    node.children.push_back(build_know_node(arch, fb, comp, premise));
  if (prov.cite != kNoCite) {
    node.cites.push_back(prov.rule == "K-DED"
                             ? to_string(arch.rules.at(prov.cite))
                             : to_string(arch.primitives.at(prov.cite)));
    if (prov.cite2 != kNoCite)
      node.cites.push_back(to_string(arch.primitives.at(prov.cite2)));
  }
  return node;
}

void collect_query_terms(const Property& p, std::vector<Term>& out) {
  if (const auto* h = std::get_if<PropHasVar>(&p.node)) {
    out.push_back(Term::var(h->var));
  } else if (const auto* hc = std::get_if<PropHasConst>(&p.node)) {
    out.push_back(Term::constant(hc->konst));
  } else if (const auto* n = std::get_if<PropHasNoneVar>(&p.node)) {
    out.push_back(Term::var(n->var));
  } else if (const auto* nc = std::get_if<PropHasNoneConst>(&p.node)) {
    out.push_back(Term::constant(nc->konst));
  } else if (const auto* k = std::get_if<PropKnow>(&p.node)) {
    out.push_back(k->eq.args[0]);
    out.push_back(k->eq.args[1]);
  } else {
    for (const Property& part : std::get<PropConj>(p.node).parts)
      collect_query_terms(part, out);
  }
}

std::optional<ProofNode> prove_property(const Architecture& arch, const FactBase& fb,
                                        const Property& p) {
  if (const auto* h = std::get_if<PropHasVar>(&p.node)) {
    std::optional<Multiplicity> have = fb.var_count(h->comp, h->var);
    Multiplicity want = Multiplicity::finite(h->count);
    if (!have || !have->covers(want)) return std::nullopt;
    return build_has_node(arch, fb, h->comp, h->var, false, want);
  }
  if (const auto* hc = std::get_if<PropHasConst>(&p.node)) {
    if (!fb.has_const(hc->comp, hc->konst)) return std::nullopt;
    return build_has_node(arch, fb, hc->comp, hc->konst, true, std::nullopt);
  }
  if (const auto* n = std::get_if<PropHasNoneVar>(&p.node)) {
    if (fb.var_count(n->comp, n->var)) return std::nullopt;
    ProofNode node;
    node.rule = "HN";
    node.conclusion = HasNoneFact{n->comp, n->var, false};
    node.cites.push_back("fact-base digest: " + fb.digest());
    return node;
  }
  if (const auto* nc = std::get_if<PropHasNoneConst>(&p.node)) {
    if (fb.has_const(nc->comp, nc->konst)) return std::nullopt;
    ProofNode node;
    node.rule = "HN'";
    node.conclusion = HasNoneFact{nc->comp, nc->konst, true};
    node.cites.push_back("fact-base digest: " + fb.digest());
    return node;
  }
  if (const auto* k = std::get_if<PropKnow>(&p.node)) {
    if (!fb.knows(k->comp, k->eq)) return std::nullopt;
    return build_know_node(arch, fb, k->comp, k->eq);
  }
  const auto& conj = std::get<PropConj>(p.node);
  ProofNode node;
  bool all_know = true;
  std::string know_comp;
  for (const Property& part : conj.parts) {
    const auto* pk = std::get_if<PropKnow>(&part.node);
    if (!pk || (!know_comp.empty() && know_comp != pk->comp)) {
      all_know = false;
      break;
    }
    know_comp = pk->comp;
  }
  node.rule = all_know ? "K-AND" : "I-AND";
  node.conclusion = p;
  for (const Property& part : conj.parts) {
    std::optional<ProofNode> sub = prove_property(arch, fb, part);
    if (!sub) return std::nullopt;
    node.children.push_back(std::move(*sub));
  }
  return node;
}

}  // namespace

Verdict derive(const Architecture& arch, const Property& query) {
  Property resolved = resolve_property(query, arch);
  std::vector<Term> seeds;
  collect_query_terms(resolved, seeds);
  FactBase fb = saturate(arch, seeds);
  Verdict verdict;
  verdict.stats = fb.stats();
  verdict.query = to_string(resolved);
  verdict.proof = prove_property(arch, fb, resolved);
  verdict.derivable = verdict.proof.has_value();
  return verdict;
}

// --- validation -------------------------------------------------------------

namespace {

struct ValidationContext {
  const Architecture& arch;
  std::optional<FactBase> base;  // saturated lazily, only for HN / HN' nodes

  const FactBase& saturated() {
    if (!base) base = saturate(arch);
    return *base;
  }
};

bool conclusion_satisfies(const Property& part, const ProofConclusion& c,
                          const Architecture& arch);

bool validate_node(ValidationContext& ctx, const ProofNode& node);

bool validate_has_leaf(ValidationContext& ctx, const ProofNode& node) {
  const auto* fact = std::get_if<HasFact>(&node.conclusion);
  if (!fact || !node.children.empty()) return false;
  for (const Primitive& p : ctx.arch.primitives) {
    if (node.rule == "H1") {
      const auto* h = std::get_if<HasVarPrim>(&p);
      if (h && !fact->is_const && h->comp == fact->comp && h->var == fact->subject &&
          h->mult == fact->count)
        return true;
    } else if (node.rule == "H1'") {
      const auto* h = std::get_if<HasConstPrim>(&p);
      if (h && fact->is_const && h->comp == fact->comp && h->konst == fact->subject)
        return true;
    } else if (node.rule == "H2" || node.rule == "H2'") {
      const auto* r = std::get_if<ReceivePrim>(&p);
      if (!r || r->dst != fact->comp) continue;
      bool want_const = node.rule == "H2'";
      if (fact->is_const != want_const) continue;
      if (!want_const && !(r->mult == fact->count)) continue;
      for (const Item& it : r->items)
        if (item_is_const(it) == want_const && item_name(it) == fact->subject)
          return true;
    } else if (node.rule == "H3") {
      const auto* cp = std::get_if<ComputePrim>(&p);
      if (cp && !fact->is_const && cp->target == fact->subject &&
          cp->mult == fact->count)
        for (const ComponentId& member : cp->group)
          if (member == fact->comp) return true;
    }
  }
  return false;
}

bool validate_dep_node(ValidationContext& ctx, const ProofNode& node) {
  const auto* fact = std::get_if<HasFact>(&node.conclusion);
  if (!fact) return false;
  bool want_const = node.rule == "H5'";
  if (fact->is_const != want_const) return false;
  if (!want_const && !(fact->count == Multiplicity::finite(1))) return false;
  for (const DepEntry& d : ctx.arch.deps) {
    if (d.owner != fact->comp || d.target != fact->subject ||
        d.target_is_const != want_const)
      continue;
    if (d.premises.size() != node.children.size()) continue;
    bool all = true;
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      const DepPremise& pr = d.premises[i];
      const auto* ch = std::get_if<HasFact>(&node.children[i].conclusion);
      if (!ch || ch->comp != fact->comp || ch->subject != pr.subject ||
          ch->is_const != pr.is_const || (!pr.is_const && !(ch->count == pr.need))) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool validate_know_leaf(ValidationContext& ctx, const ProofNode& node) {
  const auto* fact = std::get_if<KnowFact>(&node.conclusion);
  if (!fact || !node.children.empty()) return false;
  std::set<std::pair<ComponentId, ComponentId>> trust;
  for (const Primitive& p : ctx.arch.primitives)
    if (const auto* t = std::get_if<TrustPrim>(&p))
      trust.emplace(t->truster, t->trustee);
  for (const Primitive& p : ctx.arch.primitives) {
    if (node.rule == "K1") {
      const auto* cp = std::get_if<ComputePrim>(&p);
      if (!cp) continue;
      if (!(fact->eq == Equation::equal(Term::var(cp->target), cp->rhs))) continue;
      for (const ComponentId& member : cp->group)
        if (member == fact->comp) return true;
    } else {
      const auto* vp = std::get_if<VerifyPrim>(&p);
      if (!vp || vp->comp != fact->comp) continue;
      if (node.rule == "K5") {
        const auto* att = std::get_if<Attestation>(&vp->statement);
        if (!att || !trust.count({vp->comp, att->issuer})) continue;
        for (const Equation& claim : att->claims)
          if (claim == fact->eq) return true;
      } else if (node.rule == "K3" || node.rule == "K4") {
        const auto* ps = std::get_if<ProofStatement>(&vp->statement);
        if (!ps) continue;
        for (const ProofPayloadItem& item : ps->payload) {
          if (node.rule == "K3") {
            const auto* e = std::get_if<Equation>(&item);
            if (e && *e == fact->eq) return true;
          } else {
            const auto* att = std::get_if<Attestation>(&item);
            if (!att || !trust.count({vp->comp, att->issuer})) continue;
            for (const Equation& claim : att->claims)
              if (claim == fact->eq) return true;
          }
        }
      }
    }
  }
  return false;
}

bool validate_deduction_node(ValidationContext& ctx, const ProofNode& node) {
  const auto* fact = std::get_if<KnowFact>(&node.conclusion);
  if (!fact) return false;
  std::vector<Equation> premises;
  for (const ProofNode& child : node.children) {
    const auto* ch = std::get_if<KnowFact>(&child.conclusion);
    if (!ch || ch->comp != fact->comp) return false;
    premises.push_back(ch->eq);
  }
  for (const DeductiveRule& rule : ctx.arch.rules) {
    if (rule.owner && *rule.owner != fact->comp) continue;
    if (rule.premises.size() != premises.size()) continue;
    std::map<std::string, Term> sub;
    bool all = true;
    for (std::size_t i = 0; i < premises.size(); ++i)
      if (!match_equation(rule.premises[i], premises[i], sub)) {
        all = false;
        break;
      }
    if (all && subst_equation(rule.conclusion, sub) == fact->eq) return true;
  }
  return false;
}

bool validate_equality_node(const ProofNode& node) {
  const auto* fact = std::get_if<KnowFact>(&node.conclusion);
  if (!fact) return false;
  std::vector<const KnowFact*> premises;
  for (const ProofNode& child : node.children) {
    const auto* ch = std::get_if<KnowFact>(&child.conclusion);
    if (!ch || ch->comp != fact->comp) return false;
    premises.push_back(ch);
  }
  if (node.rule == "EQ-SYM") {
    return premises.size() == 1 && premises[0]->eq.pred == Pred::eq &&
           fact->eq == Equation::equal(premises[0]->eq.args[1], premises[0]->eq.args[0]);
  }
  if (node.rule == "EQ-TRANS") {
    if (premises.size() != 2) return false;
    const Equation& a = premises[0]->eq;
    const Equation& b = premises[1]->eq;
    return a.pred == Pred::eq && b.pred == Pred::eq && a.args[1] == b.args[0] &&
           fact->eq == Equation::equal(a.args[0], b.args[1]);
  }
  if (node.rule == "EQ-SUBST") {
    if (premises.size() != 2) return false;
    const Equation& eq = premises[0]->eq;
    const Equation& target = premises[1]->eq;
    if (eq.pred != Pred::eq) return false;
    Equation rewritten{target.pred,
                       {rewrite_term(target.args[0], eq.args[0], eq.args[1]),
                        rewrite_term(target.args[1], eq.args[0], eq.args[1])}};
    return !(rewritten == target) && fact->eq == rewritten;
  }
  return false;
}

bool validate_conjunction_node(ValidationContext& ctx, const ProofNode& node) {
  const auto* prop = std::get_if<Property>(&node.conclusion);
  if (!prop) return false;
  Property resolved = resolve_property(*prop, ctx.arch);
  const auto* conj = std::get_if<PropConj>(&resolved.node);
  if (!conj || conj->parts.size() != node.children.size()) return false;
  if (node.rule == "K-AND") {
    std::string comp;
    for (const Property& part : conj->parts) {
      const auto* pk = std::get_if<PropKnow>(&part.node);
      if (!pk || (!comp.empty() && comp != pk->comp)) return false;
      comp = pk->comp;
    }
  }
  for (std::size_t i = 0; i < conj->parts.size(); ++i)
    if (!conclusion_satisfies(conj->parts[i], node.children[i].conclusion, ctx.arch))
      return false;
  return true;
}

bool conclusion_satisfies(const Property& part, const ProofConclusion& c,
                          const Architecture& arch) {
  if (const auto* h = std::get_if<PropHasVar>(&part.node)) {
    const auto* fact = std::get_if<HasFact>(&c);
    return fact && !fact->is_const && fact->comp == h->comp &&
           fact->subject == h->var && fact->count == Multiplicity::finite(h->count);
  }
  if (const auto* hc = std::get_if<PropHasConst>(&part.node)) {
    const auto* fact = std::get_if<HasFact>(&c);
    return fact && fact->is_const && fact->comp == hc->comp &&
           fact->subject == hc->konst;
  }
  if (const auto* n = std::get_if<PropHasNoneVar>(&part.node)) {
    const auto* fact = std::get_if<HasNoneFact>(&c);
    return fact && !fact->is_const && fact->comp == n->comp &&
           fact->subject == n->var;
  }
  if (const auto* nc = std::get_if<PropHasNoneConst>(&part.node)) {
    const auto* fact = std::get_if<HasNoneFact>(&c);
    return fact && fact->is_const && fact->comp == nc->comp &&
           fact->subject == nc->konst;
  }
  if (const auto* k = std::get_if<PropKnow>(&part.node)) {
    const auto* fact = std::get_if<KnowFact>(&c);
    return fact && fact->comp == k->comp && fact->eq == k->eq;
  }
  const auto* nested = std::get_if<Property>(&c);
  return nested && resolve_property(*nested, arch) == part;
}

bool validate_absence_node(ValidationContext& ctx, const ProofNode& node) {
  const auto* fact = std::get_if<HasNoneFact>(&node.conclusion);
  if (!fact || !node.children.empty()) return false;
  if (fact->is_const != (node.rule == "HN'")) return false;
  const FactBase& fb = ctx.saturated();
  return fact->is_const ? !fb.has_const(fact->comp, fact->subject)
                        : !fb.var_count(fact->comp, fact->subject).has_value();
}

bool validate_narrowing_node(ValidationContext& ctx, const ProofNode& node) {
  const auto* fact = std::get_if<HasFact>(&node.conclusion);
  if (!fact || fact->is_const || node.children.size() != 1) return false;
  const auto* child = std::get_if<HasFact>(&node.children[0].conclusion);
  return child && !child->is_const && child->comp == fact->comp &&
         child->subject == fact->subject && !fact->count.is_infinite() &&
         child->count.covers(fact->count);
}

bool validate_node(ValidationContext& ctx, const ProofNode& node) {
  const std::string& r = node.rule;
  bool ok = false;
  if (r == "H1" || r == "H1'" || r == "H2" || r == "H2'" || r == "H3")
    ok = validate_has_leaf(ctx, node);
  else if (r == "H4")
    ok = validate_narrowing_node(ctx, node);
  else if (r == "H5" || r == "H5'")
    ok = validate_dep_node(ctx, node);
  else if (r == "HN" || r == "HN'")
    ok = validate_absence_node(ctx, node);
  else if (r == "K1" || r == "K3" || r == "K4" || r == "K5")
    ok = validate_know_leaf(ctx, node);
  else if (r == "K-DED")
    ok = validate_deduction_node(ctx, node);
  else if (r == "EQ-SYM" || r == "EQ-TRANS" || r == "EQ-SUBST")
    ok = validate_equality_node(node);
  else if (r == "K-AND" || r == "I-AND")
    ok = validate_conjunction_node(ctx, node);
  if (!ok) return false;
  for (const ProofNode& child : node.children)
    if (!validate_node(ctx, child)) return false;
  return true;
}

}  // namespace

bool validate_proof(const Architecture& arch, const ProofNode& tree) {
  try {
    ValidationContext ctx{arch, std::nullopt};
    return validate_node(ctx, tree);
  } catch (const std::exception&) {
    return false;
  }
}

// --- explanation ------------------------------------------------------------

namespace {

void render_proof_lines(const ProofNode& node, std::size_t depth, std::string& out) {
  for (const ProofNode& child : node.children)
    render_proof_lines(child, depth + 1, out);
  out += std::string(2 * depth + 2, ' ');
  out += "[" + node.rule + "] " + to_string(node.conclusion);
  if (!node.cites.empty()) out += " -- by " + join_strings(node.cites, "; ");
  out += "\n";
}

}  // namespace

std::string explain(const Verdict& v) {
  std::string out = "query: " + v.query + "\n";
  out += std::string("result: ") + (v.derivable ? "derivable" : "not derivable") + "\n";
  out += "saturation: " + std::to_string(v.stats.has_facts) + " possession facts, " +
         std::to_string(v.stats.know_facts) + " knowledge facts, " +
         std::to_string(v.stats.iterations) + " rounds, universe " +
         std::to_string(v.stats.universe_size) + "\n";
  if (!v.derivable || !v.proof) return out;
  out += "proof (premises above the conclusion they support):\n";
  render_proof_lines(*v.proof, 0, out);
  return out;
}

}  // namespace archproof
