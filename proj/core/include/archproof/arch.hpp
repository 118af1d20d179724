// Core model: terms, equations, statements, primitives, dependence and
// deductive relations, architectures, properties, and consistency checking.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace archproof {

using ComponentId = std::string;

// ---------------------------------------------------------------------------
// Multiplicity: a positive use bound n >= 1, or infinity.
// ---------------------------------------------------------------------------

class Multiplicity {
public:
  static Multiplicity infinite() { return Multiplicity(0, true); }
  static Multiplicity finite(std::uint64_t n);

  bool is_infinite() const { return inf_; }
  std::uint64_t value() const;  // finite multiplicities only

  // True iff a resource available this many times satisfies `need` uses:
  // infinity covers everything; a finite bound covers finite need <= bound.
  bool covers(const Multiplicity& need) const;

  friend bool operator==(const Multiplicity& a, const Multiplicity& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.n_ == b.n_);
  }
  friend bool operator<(const Multiplicity& a, const Multiplicity& b) {
    if (a.inf_ != b.inf_) return !a.inf_;  // finite < infinite
    return !a.inf_ && a.n_ < b.n_;
  }
  std::string to_string() const;  // "3" or "inf"

private:
  Multiplicity(std::uint64_t n, bool inf) : n_(n), inf_(inf) {}
  std::uint64_t n_;
  bool inf_;
};

// ---------------------------------------------------------------------------
// Terms.  T ::= X | X[k] | c | F(T1, ..., Tm); rule patterns may additionally
// contain metavariables (spelled ?x in the surface syntax).  Variable
// references inside compute right-hand sides may request the h most recent
// session values (h >= 1, rendered x^h); elsewhere h is always 1.
// ---------------------------------------------------------------------------

struct Term;

struct VariableRef {
  std::string var;
  std::optional<std::uint64_t> index;  // X[k], 1-based
  std::uint64_t history = 1;           // values consumed by a computation
};

struct ConstRef {
  std::string name;
};

struct MetaVar {
  std::string name;  // without the leading '?'
};

struct Apply {
  std::string fn;
  std::vector<Term> args;
};

struct Term {
  std::variant<VariableRef, ConstRef, MetaVar, Apply> node;

  Term() : node(VariableRef{}) {}
  Term(VariableRef v) : node(std::move(v)) {}
  Term(ConstRef c) : node(std::move(c)) {}
  Term(MetaVar m) : node(std::move(m)) {}
  Term(Apply a) : node(std::move(a)) {}

  static Term var(std::string name) { return Term(VariableRef{std::move(name), {}, 1}); }
  static Term constant(std::string name) { return Term(ConstRef{std::move(name)}); }
  static Term meta(std::string name) { return Term(MetaVar{std::move(name)}); }
  template <typename... Ts>
  static Term apply(std::string fn, Ts... args) {
    Apply a;
    a.fn = std::move(fn);
    (a.args.push_back(std::move(args)), ...);
    return Term(std::move(a));
  }
};

int compare(const Term& a, const Term& b);
inline bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
inline bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

// Canonical one-line rendering, e.g. "Mu(brp,bs,thr)", "qs^32", "x[2]", "?y".
std::string to_string(const Term& t);

// ---------------------------------------------------------------------------
// Equations.  Pred := { =, in }, always binary.
// ---------------------------------------------------------------------------

enum class Pred { eq, membership };

struct Equation {
  Pred pred = Pred::eq;
  std::vector<Term> args;  // exactly two operands

  static Equation equal(Term l, Term r) {
    return Equation{Pred::eq, {std::move(l), std::move(r)}};
  }
  const Term& lhs() const { return args[0]; }
  const Term& rhs() const { return args[1]; }
};

int compare(const Equation& a, const Equation& b);
inline bool operator==(const Equation& a, const Equation& b) { return compare(a, b) == 0; }
inline bool operator<(const Equation& a, const Equation& b) { return compare(a, b) < 0; }
std::string to_string(const Equation& e);

// ---------------------------------------------------------------------------
// Statements.  St ::= Attest_i({Eq}) | Proof_i({Att | Eq}); proofs nest
// attestations at most one level deep.
// ---------------------------------------------------------------------------

struct Attestation {
  ComponentId issuer;
  std::vector<Equation> claims;
};

using ProofPayloadItem = std::variant<Equation, Attestation>;

struct ProofStatement {
  ComponentId issuer;
  std::vector<ProofPayloadItem> payload;  // non-empty
};

using Statement = std::variant<Attestation, ProofStatement>;

int compare(const Statement& a, const Statement& b);
inline bool operator==(const Statement& a, const Statement& b) { return compare(a, b) == 0; }
inline bool operator<(const Statement& a, const Statement& b) { return compare(a, b) < 0; }
std::string to_string(const Statement& s);
ComponentId statement_issuer(const Statement& s);

// ---------------------------------------------------------------------------
// Receive items: {X} ∪ {c}.
// ---------------------------------------------------------------------------

struct VarItem {
  std::string var;
};
struct ConstItem {
  std::string name;
};
using Item = std::variant<VarItem, ConstItem>;

int compare(const Item& a, const Item& b);
inline bool operator==(const Item& a, const Item& b) { return compare(a, b) == 0; }
inline bool operator<(const Item& a, const Item& b) { return compare(a, b) < 0; }
std::string item_name(const Item& it);
bool item_is_const(const Item& it);

// ---------------------------------------------------------------------------
// Architectural primitives.
// ---------------------------------------------------------------------------

struct HasVarPrim {
  ComponentId comp;
  std::string var;
  Multiplicity mult = Multiplicity::infinite();
};

struct HasConstPrim {
  ComponentId comp;
  std::string konst;
};

struct ReceivePrim {
  ComponentId dst;
  ComponentId src;
  std::vector<Statement> statements;
  std::vector<Item> items;
  Multiplicity mult = Multiplicity::infinite();
};

struct ComputePrim {
  std::vector<ComponentId> group;  // non-empty
  std::string target;
  Term rhs;
  Multiplicity mult = Multiplicity::infinite();
};

struct VerifyPrim {
  ComponentId comp;
  Statement statement;
  Multiplicity mult = Multiplicity::infinite();
};

struct TrustPrim {
  ComponentId truster;
  ComponentId trustee;
};

struct ResetPrim {};

using Primitive = std::variant<HasVarPrim, HasConstPrim, ReceivePrim,
                               ComputePrim, VerifyPrim, TrustPrim, ResetPrim>;

int compare(const Primitive& a, const Primitive& b);
inline bool operator==(const Primitive& a, const Primitive& b) { return compare(a, b) == 0; }
std::string to_string(const Primitive& p);

// The multiplicity carried by a primitive, if any (mul(alpha)).
std::optional<Multiplicity> primitive_multiplicity(const Primitive& p);

// ---------------------------------------------------------------------------
// Dependence relations Dep_i(Y, {X^(n)} ∪ {c}) and deductive rules E ▷ Eq.
// ---------------------------------------------------------------------------

struct DepPremise {
  std::string subject;
  bool is_const = false;
  Multiplicity need = Multiplicity::finite(1);  // constants: possession only
};

struct DepEntry {
  ComponentId owner;
  std::string target;
  bool target_is_const = false;
  std::vector<DepPremise> premises;
};

struct DeductiveRule {
  std::optional<ComponentId> owner;  // nullopt: shared by every component
  std::vector<Equation> premises;
  Equation conclusion;
};

// Metavariable names occurring in an equation / rule.
std::vector<std::string> metavars_of(const Equation& e);
std::vector<std::string> metavars_of(const DeductiveRule& r);

// Canonical one-line renderings (also used by the surface syntax).
std::string to_string(const DepEntry& d);       // dep T: qr <- {ind^32, qs^32}
std::string to_string(const DeductiveRule& r);  // rule: {...} |> ...

// ---------------------------------------------------------------------------
// Architecture.
// ---------------------------------------------------------------------------

struct VariableDecl {
  std::string name;
  std::uint64_t range = 1;  // array size; 1 for plain variables
};

struct FunctionDecl {
  std::string name;
  unsigned arity = 0;
};

struct Architecture {
  std::vector<ComponentId> components;
  std::vector<VariableDecl> variables;
  std::vector<std::string> constants;
  std::vector<FunctionDecl> functions;
  std::vector<Primitive> primitives;
  std::vector<DepEntry> deps;
  std::vector<DeductiveRule> rules;
  std::vector<Equation> functionality;  // Ω, informational only

  bool has_component(const ComponentId& c) const;
  const VariableDecl* find_variable(const std::string& name) const;
  bool has_constant(const std::string& name) const;
  const FunctionDecl* find_function(const std::string& name) const;
  bool has_reset() const;
  std::vector<std::pair<ComponentId, ComponentId>> trust_pairs() const;
};

bool operator==(const Architecture& a, const Architecture& b);

// ---------------------------------------------------------------------------
// Properties (the query language φ).
// ---------------------------------------------------------------------------

struct Property;

struct PropHasVar {
  ComponentId comp;
  std::string var;
  std::uint64_t count = 1;  // n >= 1
};
struct PropHasConst {
  ComponentId comp;
  std::string konst;
};
struct PropHasNoneVar {
  ComponentId comp;
  std::string var;
};
struct PropHasNoneConst {
  ComponentId comp;
  std::string konst;
};
struct PropKnow {
  ComponentId comp;
  Equation eq;
};
struct PropConj {
  std::vector<Property> parts;  // two or more
};

struct Property {
  std::variant<PropHasVar, PropHasConst, PropHasNoneVar, PropHasNoneConst,
               PropKnow, PropConj>
      node;
};

int compare(const Property& a, const Property& b);
inline bool operator==(const Property& a, const Property& b) { return compare(a, b) == 0; }
std::string to_string(const Property& p);

// ---------------------------------------------------------------------------
// Consistency.
// ---------------------------------------------------------------------------

struct Violation {
  std::string code;     // "compute-access", "mixed-multiplicity", ...
  std::string message;  // human-readable description naming the primitive
};

struct ConsistencyReport {
  std::vector<Violation> violations;
  // The architecture's uniform bound: present iff consistent. Infinite when
  // no primitive specifies a finite multiplicity.
  std::optional<Multiplicity> bound;

  bool consistent() const { return violations.empty(); }
};

// Checks, against the declarations and each primitive:
//  - "undeclared-id": a component/variable/constant/function reference that is
//    not declared (including Trust pairs and statement issuers);
//  - "compute-access": a Compute whose right-hand side uses a value some group
//    member cannot obtain through Has/Receive/Compute;
//  - "mixed-multiplicity": two primitives specifying different finite bounds;
//  - "empty-group", "self-definition", "dep-target-in-premises",
//    "rule-range", "bad-arity", "index-range", "metavar-context",
//    "history-context": structural invariants of the model.
ConsistencyReport check_consistency(const Architecture& arch);

}  // namespace archproof
