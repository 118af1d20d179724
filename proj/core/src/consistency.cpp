#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "archproof/arch.hpp"

namespace archproof {
namespace {

// Contexts differ in which term features they admit: metavariables appear only
// in deductive rules, history superscripts only in compute right-hand sides.
struct TermCtx {
  bool allow_meta = false;
  bool allow_history = false;
};

class Checker {
public:
  explicit Checker(const Architecture& arch) : arch_(arch) {}

  ConsistencyReport run() {
    for (const Primitive& p : arch_.primitives) check_primitive(p);
    for (std::size_t i = 0; i < arch_.deps.size(); ++i) check_dep(arch_.deps[i], i);
    for (std::size_t i = 0; i < arch_.rules.size(); ++i) check_rule(arch_.rules[i], i);
    for (const Equation& e : arch_.functionality)
      check_equation(e, TermCtx{}, "functionality clause '" + to_string(e) + "'");
    check_multiplicities();

    ConsistencyReport report;
    report.violations = std::move(violations_);
    if (report.violations.empty()) report.bound = uniform_bound();
    return report;
  }

private:
  void add(std::string code, std::string message) {
    violations_.push_back(Violation{std::move(code), std::move(message)});
  }

  void check_component(const ComponentId& c, const std::string& where) {
    if (!arch_.has_component(c))
      add("undeclared-id", "unknown component '" + c + "' in " + where);
  }

  void check_var_name(const std::string& v, const std::string& where) {
    if (!arch_.find_variable(v))
      add("undeclared-id", "unknown variable '" + v + "' in " + where);
  }

  void check_const_name(const std::string& c, const std::string& where) {
    if (!arch_.has_constant(c))
      add("undeclared-id", "unknown constant '" + c + "' in " + where);
  }

  void check_term(const Term& t, const TermCtx& ctx, const std::string& where) {
    if (const auto* v = std::get_if<VariableRef>(&t.node)) {
      const VariableDecl* decl = arch_.find_variable(v->var);
      if (!decl) {
        add("undeclared-id", "unknown variable '" + v->var + "' in " + where);
      } else if (v->index && (*v->index == 0 || *v->index > decl->range)) {
        add("index-range", "index " + std::to_string(*v->index) + " outside range of '" +
                               v->var + "' (1.." + std::to_string(decl->range) + ") in " + where);
      }
      if (v->history > 1 && !ctx.allow_history)
        add("history-context",
            "history superscript on '" + v->var + "' outside a compute right-hand side in " + where);
      return;
    }
    if (const auto* c = std::get_if<ConstRef>(&t.node)) {
      check_const_name(c->name, where);
      return;
    }
    if (const auto* m = std::get_if<MetaVar>(&t.node)) {
      if (!ctx.allow_meta)
        add("metavar-context", "metavariable '?" + m->name + "' outside a rule in " + where);
      return;
    }
    const auto& a = std::get<Apply>(t.node);
    const FunctionDecl* decl = arch_.find_function(a.fn);
    if (!decl) {
      add("undeclared-id", "unknown function '" + a.fn + "' in " + where);
    } else if (decl->arity != a.args.size()) {
      add("bad-arity", "'" + a.fn + "' declared with arity " + std::to_string(decl->arity) +
                           " but applied to " + std::to_string(a.args.size()) +
                           " arguments in " + where);
    }
    for (const Term& arg : a.args) check_term(arg, ctx, where);
  }

  void check_equation(const Equation& e, const TermCtx& ctx, const std::string& where) {
    for (const Term& t : e.args) check_term(t, ctx, where);
  }

  void check_statement(const Statement& s, const std::string& where) {
    check_component(statement_issuer(s), where);
    if (const auto* att = std::get_if<Attestation>(&s)) {
      for (const Equation& e : att->claims) check_equation(e, TermCtx{}, where);
      return;
    }
    for (const ProofPayloadItem& item : std::get<ProofStatement>(s).payload) {
      if (const auto* e = std::get_if<Equation>(&item)) {
        check_equation(*e, TermCtx{}, where);
      } else {
        const auto& att = std::get<Attestation>(item);
        check_component(att.issuer, where);
        for (const Equation& e : att.claims) check_equation(e, TermCtx{}, where);
      }
    }
  }

  void check_primitive(const Primitive& p) {
    const std::string where = "primitive '" + to_string(p) + "'";
    if (const auto* h = std::get_if<HasVarPrim>(&p)) {
      check_component(h->comp, where);
      check_var_name(h->var, where);
    } else if (const auto* h = std::get_if<HasConstPrim>(&p)) {
      check_component(h->comp, where);
      check_const_name(h->konst, where);
    } else if (const auto* r = std::get_if<ReceivePrim>(&p)) {
      check_component(r->dst, where);
      check_component(r->src, where);
      for (const Statement& st : r->statements) check_statement(st, where);
      for (const Item& it : r->items) {
        if (item_is_const(it))
          check_const_name(item_name(it), where);
        else
          check_var_name(item_name(it), where);
      }
    } else if (const auto* c = std::get_if<ComputePrim>(&p)) {
      if (c->group.empty()) add("empty-group", "compute with empty group in " + where);
      for (const ComponentId& member : c->group) check_component(member, where);
      check_var_name(c->target, where);
      check_term(c->rhs, TermCtx{false, true}, where);
      if (term_mentions_var(c->rhs, c->target))
        add("self-definition",
            "'" + c->target + "' appears in its own right-hand side in " + where);
      check_compute_access(*c, where);
    } else if (const auto* v = std::get_if<VerifyPrim>(&p)) {
      check_component(v->comp, where);
      check_statement(v->statement, where);
    } else if (const auto* t = std::get_if<TrustPrim>(&p)) {
      check_component(t->truster, where);
      check_component(t->trustee, where);
    }
  }

  static bool term_mentions_var(const Term& t, const std::string& name) {
    if (const auto* v = std::get_if<VariableRef>(&t.node)) return v->var == name;
    if (const auto* a = std::get_if<Apply>(&t.node)) {
      for (const Term& arg : a->args)
        if (term_mentions_var(arg, name)) return true;
    }
    return false;
  }

  static void term_subjects(const Term& t, std::set<std::string>& vars,
                            std::set<std::string>& consts) {
    if (const auto* v = std::get_if<VariableRef>(&t.node)) {
      vars.insert(v->var);
    } else if (const auto* c = std::get_if<ConstRef>(&t.node)) {
      consts.insert(c->name);
    } else if (const auto* a = std::get_if<Apply>(&t.node)) {
      for (const Term& arg : a->args) term_subjects(arg, vars, consts);
    }
  }

  bool obtainable_var(const ComponentId& i, const std::string& x) const {
    for (const Primitive& p : arch_.primitives) {
      if (const auto* h = std::get_if<HasVarPrim>(&p)) {
        if (h->comp == i && h->var == x) return true;
      } else if (const auto* r = std::get_if<ReceivePrim>(&p)) {
        if (r->dst == i)
          for (const Item& it : r->items)
            if (!item_is_const(it) && item_name(it) == x) return true;
      } else if (const auto* c = std::get_if<ComputePrim>(&p)) {
        if (c->target == x &&
            std::find(c->group.begin(), c->group.end(), i) != c->group.end())
          return true;
      }
    }
    return false;
  }

  bool obtainable_const(const ComponentId& i, const std::string& name) const {
    for (const Primitive& p : arch_.primitives) {
      if (const auto* h = std::get_if<HasConstPrim>(&p)) {
        if (h->comp == i && h->konst == name) return true;
      } else if (const auto* r = std::get_if<ReceivePrim>(&p)) {
        if (r->dst == i)
          for (const Item& it : r->items)
            if (item_is_const(it) && item_name(it) == name) return true;
      }
    }
    return false;
  }

  void check_compute_access(const ComputePrim& c, const std::string& where) {
    std::set<std::string> vars, consts;
    term_subjects(c.rhs, vars, consts);
    for (const ComponentId& member : c.group) {
      if (!arch_.has_component(member)) continue;  // reported as undeclared-id
      for (const std::string& x : vars)
        if (arch_.find_variable(x) && !obtainable_var(member, x))
          add("compute-access",
              "component '" + member + "' cannot obtain '" + x + "' used in " + where);
      for (const std::string& k : consts)
        if (arch_.has_constant(k) && !obtainable_const(member, k))
          add("compute-access",
              "component '" + member + "' cannot obtain '" + k + "' used in " + where);
    }
  }

  void check_dep(const DepEntry& dep, std::size_t idx) {
    const std::string where = "dep entry " + std::to_string(idx + 1) + " (for '" +
                              dep.owner + "', target '" + dep.target + "')";
    check_component(dep.owner, where);
    if (dep.target_is_const)
      check_const_name(dep.target, where);
    else
      check_var_name(dep.target, where);
    for (const DepPremise& pr : dep.premises) {
      if (pr.is_const)
        check_const_name(pr.subject, where);
      else
        check_var_name(pr.subject, where);
      if (pr.subject == dep.target && pr.is_const == dep.target_is_const)
        add("dep-target-in-premises",
            "target '" + dep.target + "' listed among its own premises in " + where);
    }
  }

  void check_rule(const DeductiveRule& rule, std::size_t idx) {
    const std::string where = "rule " + std::to_string(idx + 1);
    if (rule.owner) check_component(*rule.owner, where);
    TermCtx ctx{true, false};
    for (const Equation& e : rule.premises) check_equation(e, ctx, where);
    check_equation(rule.conclusion, ctx, where);
    // Range restriction: matching the premises against ground equations must
    // ground the conclusion, so every conclusion metavariable needs to occur
    // in some premise.
    std::set<std::string> premise_vars;
    for (const Equation& e : rule.premises)
      for (const std::string& m : metavars_of(e)) premise_vars.insert(m);
    for (const std::string& m : metavars_of(rule.conclusion))
      if (!premise_vars.count(m))
        add("rule-range",
            "metavariable '?" + m + "' of the conclusion is unbound by the premises in " + where);
  }

  void check_multiplicities() {
    std::set<std::uint64_t> finite;
    for (const Primitive& p : arch_.primitives)
      if (auto m = primitive_multiplicity(p); m && !m->is_infinite())
        finite.insert(m->value());
    if (finite.size() > 1) {
      std::string values;
      for (std::uint64_t v : finite) {
        if (!values.empty()) values += ", ";
        values += std::to_string(v);
      }
      add("mixed-multiplicity",
          "primitives specify different finite multiplicities: " + values);
    }
  }

  Multiplicity uniform_bound() const {
    for (const Primitive& p : arch_.primitives)
      if (auto m = primitive_multiplicity(p); m && !m->is_infinite()) return *m;
    return Multiplicity::infinite();
  }

  const Architecture& arch_;
  std::vector<Violation> violations_;
};

}  // namespace

ConsistencyReport check_consistency(const Architecture& arch) {
  return Checker(arch).run();
}

}  // namespace archproof
