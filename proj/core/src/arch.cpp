#include "archproof/arch.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace archproof {
namespace {

int cmp(std::uint64_t a, std::uint64_t b) { return a < b ? -1 : (a > b ? 1 : 0); }

int cmp(const std::string& a, const std::string& b) {
  int r = a.compare(b);
  return r < 0 ? -1 : (r > 0 ? 1 : 0);
}

int cmp(bool a, bool b) { return cmp(std::uint64_t(a), std::uint64_t(b)); }

int cmp(const std::optional<std::uint64_t>& a, const std::optional<std::uint64_t>& b) {
  if (a.has_value() != b.has_value()) return a.has_value() ? 1 : -1;
  return a ? cmp(*a, *b) : 0;
}

int cmp(const Multiplicity& a, const Multiplicity& b) {
  if (a == b) return 0;
  return a < b ? -1 : 1;
}

template <typename T, typename F>
int cmp_vec(const std::vector<T>& a, const std::vector<T>& b, F elem) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int r = elem(a[i], b[i]); r != 0) return r;
  return cmp(std::uint64_t(a.size()), std::uint64_t(b.size()));
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string mult_suffix(const Multiplicity& m) { return "^" + m.to_string(); }

void collect_metavars(const Term& t, std::set<std::string>& out) {
  if (const auto* m = std::get_if<MetaVar>(&t.node)) {
    out.insert(m->name);
  } else if (const auto* a = std::get_if<Apply>(&t.node)) {
    for (const Term& arg : a->args) collect_metavars(arg, out);
  }
}

}  // namespace

// --- Multiplicity -----------------------------------------------------------

Multiplicity Multiplicity::finite(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("multiplicity must be positive");
  return Multiplicity(n, false);
}

std::uint64_t Multiplicity::value() const {
  if (inf_) throw std::logic_error("value() on infinite multiplicity");
  return n_;
}

bool Multiplicity::covers(const Multiplicity& need) const {
  if (inf_) return true;
  if (need.inf_) return false;
  return need.n_ <= n_;
}

std::string Multiplicity::to_string() const {
  return inf_ ? std::string("inf") : std::to_string(n_);
}

// --- Term -------------------------------------------------------------------

int compare(const Term& a, const Term& b) {
  if (a.node.index() != b.node.index())
    return a.node.index() < b.node.index() ? -1 : 1;
  switch (a.node.index()) {
    case 0: {
      const auto& x = std::get<VariableRef>(a.node);
      const auto& y = std::get<VariableRef>(b.node);
      if (int r = cmp(x.var, y.var)) return r;
      if (int r = cmp(x.index, y.index)) return r;
      return cmp(x.history, y.history);
    }
    case 1:
      return cmp(std::get<ConstRef>(a.node).name, std::get<ConstRef>(b.node).name);
    case 2:
      return cmp(std::get<MetaVar>(a.node).name, std::get<MetaVar>(b.node).name);
    default: {
      const auto& x = std::get<Apply>(a.node);
      const auto& y = std::get<Apply>(b.node);
      if (int r = cmp(x.fn, y.fn)) return r;
      return cmp_vec(x.args, y.args,
                     [](const Term& s, const Term& t) { return compare(s, t); });
    }
  }
}

std::string to_string(const Term& t) {
  if (const auto* v = std::get_if<VariableRef>(&t.node)) {
    std::string out = v->var;
    if (v->index) out += "[" + std::to_string(*v->index) + "]";
    if (v->history > 1) out += "^" + std::to_string(v->history);
    return out;
  }
  if (const auto* c = std::get_if<ConstRef>(&t.node)) return c->name;
  if (const auto* m = std::get_if<MetaVar>(&t.node)) return "?" + m->name;
  const auto& a = std::get<Apply>(t.node);
  std::vector<std::string> parts;
  parts.reserve(a.args.size());
  for (const Term& arg : a.args) parts.push_back(to_string(arg));
  return a.fn + "(" + join(parts, ", ") + ")";
}

// --- Equation ---------------------------------------------------------------

int compare(const Equation& a, const Equation& b) {
  if (int r = cmp(std::uint64_t(a.pred), std::uint64_t(b.pred))) return r;
  return cmp_vec(a.args, b.args,
                 [](const Term& s, const Term& t) { return compare(s, t); });
}

std::string to_string(const Equation& e) {
  const char* op = e.pred == Pred::eq ? " = " : " in ";
  return to_string(e.args[0]) + op + to_string(e.args[1]);
}

// --- Statement --------------------------------------------------------------

namespace {

int cmp_eqs(const std::vector<Equation>& a, const std::vector<Equation>& b) {
  return cmp_vec(a, b, [](const Equation& x, const Equation& y) { return compare(x, y); });
}

int cmp_payload_item(const ProofPayloadItem& a, const ProofPayloadItem& b) {
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  if (a.index() == 0) return compare(std::get<Equation>(a), std::get<Equation>(b));
  const auto& x = std::get<Attestation>(a);
  const auto& y = std::get<Attestation>(b);
  if (int r = cmp(x.issuer, y.issuer)) return r;
  return cmp_eqs(x.claims, y.claims);
}

std::string attestation_text(const Attestation& att) {
  std::vector<std::string> parts;
  parts.reserve(att.claims.size());
  for (const Equation& e : att.claims) parts.push_back(to_string(e));
  return "attest " + att.issuer + " {" + join(parts, "; ") + "}";
}

}  // namespace

int compare(const Statement& a, const Statement& b) {
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  if (a.index() == 0) {
    const auto& x = std::get<Attestation>(a);
    const auto& y = std::get<Attestation>(b);
    if (int r = cmp(x.issuer, y.issuer)) return r;
    return cmp_eqs(x.claims, y.claims);
  }
  const auto& x = std::get<ProofStatement>(a);
  const auto& y = std::get<ProofStatement>(b);
  if (int r = cmp(x.issuer, y.issuer)) return r;
  return cmp_vec(x.payload, y.payload, cmp_payload_item);
}

std::string to_string(const Statement& s) {
  if (const auto* att = std::get_if<Attestation>(&s)) return attestation_text(*att);
  const auto& pr = std::get<ProofStatement>(s);
  std::vector<std::string> parts;
  parts.reserve(pr.payload.size());
  for (const ProofPayloadItem& item : pr.payload) {
    if (const auto* eq = std::get_if<Equation>(&item))
      parts.push_back(to_string(*eq));
    else
      parts.push_back(attestation_text(std::get<Attestation>(item)));
  }
  return "proof " + pr.issuer + " {" + join(parts, "; ") + "}";
}

ComponentId statement_issuer(const Statement& s) {
  if (const auto* att = std::get_if<Attestation>(&s)) return att->issuer;
  return std::get<ProofStatement>(s).issuer;
}

// --- Item -------------------------------------------------------------------

int compare(const Item& a, const Item& b) {
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  return cmp(item_name(a), item_name(b));
}

std::string item_name(const Item& it) {
  if (const auto* v = std::get_if<VarItem>(&it)) return v->var;
  return std::get<ConstItem>(it).name;
}

bool item_is_const(const Item& it) { return std::holds_alternative<ConstItem>(it); }

// --- Primitive --------------------------------------------------------------

int compare(const Primitive& a, const Primitive& b) {
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  switch (a.index()) {
    case 0: {
      const auto& x = std::get<HasVarPrim>(a);
      const auto& y = std::get<HasVarPrim>(b);
      if (int r = cmp(x.comp, y.comp)) return r;
      if (int r = cmp(x.var, y.var)) return r;
      return cmp(x.mult, y.mult);
    }
    case 1: {
      const auto& x = std::get<HasConstPrim>(a);
      const auto& y = std::get<HasConstPrim>(b);
      if (int r = cmp(x.comp, y.comp)) return r;
      return cmp(x.konst, y.konst);
    }
    case 2: {
      const auto& x = std::get<ReceivePrim>(a);
      const auto& y = std::get<ReceivePrim>(b);
      if (int r = cmp(x.dst, y.dst)) return r;
      if (int r = cmp(x.src, y.src)) return r;
      if (int r = cmp_vec(x.statements, y.statements,
                          [](const Statement& s, const Statement& t) { return compare(s, t); }))
        return r;
      if (int r = cmp_vec(x.items, y.items,
                          [](const Item& s, const Item& t) { return compare(s, t); }))
        return r;
      return cmp(x.mult, y.mult);
    }
    case 3: {
      const auto& x = std::get<ComputePrim>(a);
      const auto& y = std::get<ComputePrim>(b);
      if (int r = cmp_vec(x.group, y.group,
                          [](const std::string& s, const std::string& t) { return cmp(s, t); }))
        return r;
      if (int r = cmp(x.target, y.target)) return r;
      if (int r = compare(x.rhs, y.rhs)) return r;
      return cmp(x.mult, y.mult);
    }
    case 4: {
      const auto& x = std::get<VerifyPrim>(a);
      const auto& y = std::get<VerifyPrim>(b);
      if (int r = cmp(x.comp, y.comp)) return r;
      if (int r = compare(x.statement, y.statement)) return r;
      return cmp(x.mult, y.mult);
    }
    case 5: {
      const auto& x = std::get<TrustPrim>(a);
      const auto& y = std::get<TrustPrim>(b);
      if (int r = cmp(x.truster, y.truster)) return r;
      return cmp(x.trustee, y.trustee);
    }
    default:
      return 0;  // Reset
  }
}

std::string to_string(const Primitive& p) {
  if (const auto* h = std::get_if<HasVarPrim>(&p))
    return "has" + mult_suffix(h->mult) + " " + h->comp + "(" + h->var + ")";
  if (const auto* h = std::get_if<HasConstPrim>(&p))
    return "has " + h->comp + "(" + h->konst + ")";
  if (const auto* r = std::get_if<ReceivePrim>(&p)) {
    std::string out = "receive" + mult_suffix(r->mult) + " " + r->dst + " <- " + r->src;
    for (const Statement& st : r->statements) out += " " + to_string(st);
    if (!r->items.empty()) {
      std::vector<std::string> names;
      names.reserve(r->items.size());
      for (const Item& it : r->items) names.push_back(item_name(it));
      out += " items {" + join(names, ", ") + "}";
    }
    return out;
  }
  if (const auto* c = std::get_if<ComputePrim>(&p)) {
    std::vector<std::string> group(c->group.begin(), c->group.end());
    return "compute" + mult_suffix(c->mult) + " {" + join(group, ", ") + "} " +
           c->target + " = " + to_string(c->rhs);
  }
  if (const auto* v = std::get_if<VerifyPrim>(&p))
    return "verify" + mult_suffix(v->mult) + " " + v->comp + " " + to_string(v->statement);
  if (const auto* t = std::get_if<TrustPrim>(&p))
    return "trust " + t->truster + " " + t->trustee;
  return "reset";
}

std::optional<Multiplicity> primitive_multiplicity(const Primitive& p) {
  if (const auto* h = std::get_if<HasVarPrim>(&p)) return h->mult;
  if (const auto* r = std::get_if<ReceivePrim>(&p)) return r->mult;
  if (const auto* c = std::get_if<ComputePrim>(&p)) return c->mult;
  if (const auto* v = std::get_if<VerifyPrim>(&p)) return v->mult;
  return std::nullopt;
}

// --- Rules ------------------------------------------------------------------

std::string to_string(const DepEntry& d) {
  std::string premises;
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    const DepPremise& pr = d.premises[i];
    if (i) premises += ", ";
    premises += pr.subject;
    if (!pr.is_const && !(pr.need == Multiplicity::finite(1)))
      premises += "^" + pr.need.to_string();
  }
  return "dep " + d.owner + ": " + d.target + " <- {" + premises + "}";
}

std::string to_string(const DeductiveRule& r) {
  std::string premises;
  for (std::size_t i = 0; i < r.premises.size(); ++i) {
    if (i) premises += "; ";
    premises += to_string(r.premises[i]);
  }
  std::string head = r.owner ? "rule " + *r.owner : "rule";
  return head + ": {" + premises + "} |> " + to_string(r.conclusion);
}

std::vector<std::string> metavars_of(const Equation& e) {
  std::set<std::string> names;
  for (const Term& t : e.args) collect_metavars(t, names);
  return std::vector<std::string>(names.begin(), names.end());
}

std::vector<std::string> metavars_of(const DeductiveRule& r) {
  std::set<std::string> names;
  for (const Equation& e : r.premises)
    for (const Term& t : e.args) collect_metavars(t, names);
  for (const Term& t : r.conclusion.args) collect_metavars(t, names);
  return std::vector<std::string>(names.begin(), names.end());
}

// --- Architecture -----------------------------------------------------------

bool Architecture::has_component(const ComponentId& c) const {
  return std::find(components.begin(), components.end(), c) != components.end();
}

const VariableDecl* Architecture::find_variable(const std::string& name) const {
  for (const VariableDecl& v : variables)
    if (v.name == name) return &v;
  return nullptr;
}

bool Architecture::has_constant(const std::string& name) const {
  return std::find(constants.begin(), constants.end(), name) != constants.end();
}

const FunctionDecl* Architecture::find_function(const std::string& name) const {
  for (const FunctionDecl& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

bool Architecture::has_reset() const {
  for (const Primitive& p : primitives)
    if (std::holds_alternative<ResetPrim>(p)) return true;
  return false;
}

std::vector<std::pair<ComponentId, ComponentId>> Architecture::trust_pairs() const {
  std::vector<std::pair<ComponentId, ComponentId>> out;
  for (const Primitive& p : primitives)
    if (const auto* t = std::get_if<TrustPrim>(&p))
      out.emplace_back(t->truster, t->trustee);
  return out;
}

namespace {

bool eq(const VariableDecl& a, const VariableDecl& b) {
  return a.name == b.name && a.range == b.range;
}
bool eq(const FunctionDecl& a, const FunctionDecl& b) {
  return a.name == b.name && a.arity == b.arity;
}
bool eq(const DepPremise& a, const DepPremise& b) {
  return a.subject == b.subject && a.is_const == b.is_const && a.need == b.need;
}
bool eq(const DepEntry& a, const DepEntry& b) {
  if (a.owner != b.owner || a.target != b.target || a.target_is_const != b.target_is_const)
    return false;
  if (a.premises.size() != b.premises.size()) return false;
  for (std::size_t i = 0; i < a.premises.size(); ++i)
    if (!eq(a.premises[i], b.premises[i])) return false;
  return true;
}
bool eq(const DeductiveRule& a, const DeductiveRule& b) {
  return a.owner == b.owner && cmp_eqs(a.premises, b.premises) == 0 &&
         compare(a.conclusion, b.conclusion) == 0;
}
template <typename T, typename F>
bool eq_vec(const std::vector<T>& a, const std::vector<T>& b, F elem) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!elem(a[i], b[i])) return false;
  return true;
}

}  // namespace

bool operator==(const Architecture& a, const Architecture& b) {
  return a.components == b.components &&
         eq_vec(a.variables, b.variables,
                [](const VariableDecl& x, const VariableDecl& y) { return eq(x, y); }) &&
         a.constants == b.constants &&
         eq_vec(a.functions, b.functions,
                [](const FunctionDecl& x, const FunctionDecl& y) { return eq(x, y); }) &&
         eq_vec(a.primitives, b.primitives,
                [](const Primitive& x, const Primitive& y) { return compare(x, y) == 0; }) &&
         eq_vec(a.deps, b.deps,
                [](const DepEntry& x, const DepEntry& y) { return eq(x, y); }) &&
         eq_vec(a.rules, b.rules,
                [](const DeductiveRule& x, const DeductiveRule& y) { return eq(x, y); }) &&
         cmp_eqs(a.functionality, b.functionality) == 0;
}

// --- Property ---------------------------------------------------------------

int compare(const Property& a, const Property& b) {
  if (a.node.index() != b.node.index())
    return a.node.index() < b.node.index() ? -1 : 1;
  switch (a.node.index()) {
    case 0: {
      const auto& x = std::get<PropHasVar>(a.node);
      const auto& y = std::get<PropHasVar>(b.node);
      if (int r = cmp(x.comp, y.comp)) return r;
      if (int r = cmp(x.var, y.var)) return r;
      return cmp(x.count, y.count);
    }
    case 1: {
      const auto& x = std::get<PropHasConst>(a.node);
      const auto& y = std::get<PropHasConst>(b.node);
      if (int r = cmp(x.comp, y.comp)) return r;
      return cmp(x.konst, y.konst);
    }
    case 2: {
      const auto& x = std::get<PropHasNoneVar>(a.node);
      const auto& y = std::get<PropHasNoneVar>(b.node);
      if (int r = cmp(x.comp, y.comp)) return r;
      return cmp(x.var, y.var);
    }
    case 3: {
      const auto& x = std::get<PropHasNoneConst>(a.node);
      const auto& y = std::get<PropHasNoneConst>(b.node);
      if (int r = cmp(x.comp, y.comp)) return r;
      return cmp(x.konst, y.konst);
    }
    case 4: {
      const auto& x = std::get<PropKnow>(a.node);
      const auto& y = std::get<PropKnow>(b.node);
      if (int r = cmp(x.comp, y.comp)) return r;
      return compare(x.eq, y.eq);
    }
    default: {
      const auto& x = std::get<PropConj>(a.node);
      const auto& y = std::get<PropConj>(b.node);
      return cmp_vec(x.parts, y.parts,
                     [](const Property& s, const Property& t) { return compare(s, t); });
    }
  }
}

std::string to_string(const Property& p) {
  if (const auto* h = std::get_if<PropHasVar>(&p.node)) {
    std::string out = "has";
    if (h->count > 1) out += "^" + std::to_string(h->count);
    return out + " " + h->comp + "(" + h->var + ")";
  }
  if (const auto* h = std::get_if<PropHasConst>(&p.node))
    return "has " + h->comp + "(" + h->konst + ")";
  if (const auto* h = std::get_if<PropHasNoneVar>(&p.node))
    return "hasnone " + h->comp + "(" + h->var + ")";
  if (const auto* h = std::get_if<PropHasNoneConst>(&p.node))
    return "hasnone " + h->comp + "(" + h->konst + ")";
  if (const auto* k = std::get_if<PropKnow>(&p.node))
    return "knows " + k->comp + " (" + to_string(k->eq) + ")";
  const auto& c = std::get<PropConj>(p.node);
  std::vector<std::string> parts;
  parts.reserve(c.parts.size());
  for (const Property& part : c.parts) parts.push_back(to_string(part));
  return join(parts, " & ");
}

}  // namespace archproof
