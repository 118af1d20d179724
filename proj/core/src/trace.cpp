// Event semantics: state representation, the step function, compatibility
// checking, and the trace text format.
#include "archproof/trace.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "archproof/dsl.hpp"
#include "trace_detail.hpp"

namespace archproof {
namespace {

int cmp_str(const std::string& a, const std::string& b) {
  int r = a.compare(b);
  return r < 0 ? -1 : (r > 0 ? 1 : 0);
}

template <typename T, typename F>
int cmp_vec(const std::vector<T>& a, const std::vector<T>& b, F cmp_elem) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int r = cmp_elem(a[i], b[i])) return r;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

[[noreturn]] void bad_event(const std::string& what) {
  throw std::invalid_argument("trace event: " + what);
}

ComponentState& comp_state(GlobalState& s, const ComponentId& c) {
  auto it = s.components.find(c);
  if (it == s.components.end()) bad_event("unknown component '" + c + "'");
  return it->second;
}

std::vector<Value>& var_slots(ComponentState& cs, const std::string& var) {
  auto it = cs.vars.find(var);
  if (it == cs.vars.end()) bad_event("unknown variable '" + var + "'");
  return it->second;
}

std::vector<Value>& const_slots(ComponentState& cs, const std::string& konst) {
  auto it = cs.consts.find(konst);
  if (it == cs.consts.end()) bad_event("unknown constant '" + konst + "'");
  return it->second;
}

bool trusts(const Architecture& arch, const ComponentId& truster,
            const ComponentId& trustee) {
  for (const Primitive& p : arch.primitives)
    if (const auto* t = std::get_if<TrustPrim>(&p))
      if (t->truster == truster && t->trustee == trustee) return true;
  return false;
}

// Equations a verification adds to `comp`'s knowledge: attestation claims and
// nested attestation claims only when the issuer is trusted; a proof's direct
// equations unconditionally.
void add_statement_knowledge(const Architecture& arch, const ComponentId& comp,
                             const Statement& st, std::set<Equation>& out) {
  if (const auto* att = std::get_if<Attestation>(&st)) {
    if (trusts(arch, comp, att->issuer))
      out.insert(att->claims.begin(), att->claims.end());
    return;
  }
  const auto& pr = std::get<ProofStatement>(st);
  for (const ProofPayloadItem& item : pr.payload) {
    if (const auto* eq = std::get_if<Equation>(&item)) {
      out.insert(*eq);
    } else {
      const auto& att = std::get<Attestation>(item);
      if (trusts(arch, comp, att.issuer))
        out.insert(att.claims.begin(), att.claims.end());
    }
  }
}

// --- computation -----------------------------------------------------------

std::size_t count_defined(const std::vector<Value>& slots) {
  std::size_t n = 0;
  for (const Value& v : slots)
    if (v) ++n;
  return n;
}

// True iff `cs` holds enough defined values for every variable reference in
// the term (a reference x^h needs h defined entries).  Constants are checked
// across the whole group instead.
bool member_satisfies(const ComponentState& cs, const Term& t) {
  if (const auto* v = std::get_if<VariableRef>(&t.node)) {
    auto it = cs.vars.find(v->var);
    if (it == cs.vars.end()) bad_event("unknown variable '" + v->var + "'");
    return count_defined(it->second) >= v->history;
  }
  if (std::holds_alternative<MetaVar>(t.node))
    bad_event("metavariable in a computation right-hand side");
  if (const auto* a = std::get_if<Apply>(&t.node)) {
    for (const Term& arg : a->args)
      if (!member_satisfies(cs, arg)) return false;
  }
  return true;  // ConstRef / empty Apply
}

// Last defined constant value across the group, in group order.
const std::string* lookup_const(const std::vector<const ComponentState*>& members,
                                const std::string& name) {
  for (const ComponentState* cs : members) {
    auto it = cs->consts.find(name);
    if (it == cs->consts.end()) bad_event("unknown constant '" + name + "'");
    if (!it->second.empty() && it->second.back()) return &*it->second.back();
  }
  return nullptr;
}

bool consts_available(const std::vector<const ComponentState*>& members, const Term& t) {
  if (const auto* c = std::get_if<ConstRef>(&t.node))
    return lookup_const(members, c->name) != nullptr;
  if (const auto* a = std::get_if<Apply>(&t.node))
    for (const Term& arg : a->args)
      if (!consts_available(members, arg)) return false;
  return true;
}

// Evaluates a right-hand side to a token.  Variable references read the
// primary (first participating) member's slots; constants are looked up
// across the group.  Preconditions checked by the caller.
std::string eval_term(const Term& t, const ComponentState& primary,
                      const std::vector<const ComponentState*>& members) {
  if (const auto* v = std::get_if<VariableRef>(&t.node)) {
    std::vector<const std::string*> defined;
    for (const Value& slot : primary.vars.at(v->var))
      if (slot) defined.push_back(&*slot);
    std::string base;
    if (v->history == 1) {
      base = *defined.back();
    } else {
      std::vector<std::string> window;
      for (std::size_t i = defined.size() - v->history; i < defined.size(); ++i)
        window.push_back(*defined[i]);
      base = "hist(" + join(window, ";") + ")";
    }
    if (v->index) base += "[" + std::to_string(*v->index) + "]";
    return base;
  }
  if (const auto* c = std::get_if<ConstRef>(&t.node)) return *lookup_const(members, c->name);
  const auto& a = std::get<Apply>(t.node);
  std::vector<std::string> args;
  args.reserve(a.args.size());
  for (const Term& arg : a.args) args.push_back(eval_term(arg, primary, members));
  return a.fn + "(" + join(args, ";") + ")";
}

// --- event application -------------------------------------------------------

struct Stepper {
  const Architecture& arch;
  GlobalState st;

  void operator()(const HasEvent& e) {
    ComponentState& cs = comp_state(st, e.comp);
    if (cs.error) return;
    var_slots(cs, e.var).back() = e.value;
  }

  void operator()(const HasConstEvent& e) {
    ComponentState& cs = comp_state(st, e.comp);
    if (cs.error) return;
    const_slots(cs, e.konst).back() = e.konst;
  }

  void operator()(const ReceiveEvent& e) {
    comp_state(st, e.src);  // validate the sender exists
    ComponentState& cs = comp_state(st, e.dst);
    if (cs.error) return;
    for (const auto& [var, value] : e.var_values) var_slots(cs, var).back() = value;
    for (const std::string& konst : e.const_items) const_slots(cs, konst).back() = konst;
  }

  void operator()(const ComputeEvent& e) {
    if (e.group.empty()) bad_event("empty computation group");
    if (!arch.find_variable(e.target)) bad_event("unknown variable '" + e.target + "'");
    std::vector<ComponentState*> participants;
    for (const ComponentId& c : e.group) {
      ComponentState& cs = comp_state(st, c);
      if (!cs.error) participants.push_back(&cs);
    }
    if (participants.empty()) return;
    std::vector<const ComponentState*> view(participants.begin(), participants.end());
    std::vector<ComponentState*> failing;
    for (ComponentState* cs : participants)
      if (!member_satisfies(*cs, e.rhs)) failing.push_back(cs);
    if (failing.empty() && !consts_available(view, e.rhs))
      failing = participants;  // an undefined constant starves everyone
    if (!failing.empty()) {
      for (ComponentState* cs : failing) cs->error = true;
      return;  // the computation never happens; passing members are unchanged
    }
    std::string value = eval_term(e.rhs, *participants.front(), view);
    Equation learned = Equation::equal(Term::var(e.target), e.rhs);
    for (ComponentState* cs : participants) {
      var_slots(*cs, e.target).back() = value;
      cs->knowledge.insert(learned);
    }
  }

  void operator()(const VerifyEvent& e) {
    ComponentState& cs = comp_state(st, e.comp);
    if (cs.error) return;
    add_statement_knowledge(arch, e.comp, e.statement, cs.knowledge);
  }

  void operator()(const SessionEvent&) {
    ++st.session;
    for (auto& [name, cs] : st.components) {
      if (cs.error) continue;
      for (auto& [var, slots] : cs.vars) slots.push_back(std::nullopt);
      for (auto& [konst, slots] : cs.consts) slots.push_back(slots.back());
      cs.knowledge.clear();
    }
  }

  void operator()(const ResetEvent&) { st = initial_state(arch); }
};

}  // namespace

// --- events ------------------------------------------------------------------

int compare(const Event& a, const Event& b) {
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  switch (a.index()) {
    case 0: {
      const auto& x = std::get<HasEvent>(a);
      const auto& y = std::get<HasEvent>(b);
      if (int r = cmp_str(x.comp, y.comp)) return r;
      if (int r = cmp_str(x.var, y.var)) return r;
      return cmp_str(x.value, y.value);
    }
    case 1: {
      const auto& x = std::get<HasConstEvent>(a);
      const auto& y = std::get<HasConstEvent>(b);
      if (int r = cmp_str(x.comp, y.comp)) return r;
      return cmp_str(x.konst, y.konst);
    }
    case 2: {
      const auto& x = std::get<ReceiveEvent>(a);
      const auto& y = std::get<ReceiveEvent>(b);
      if (int r = cmp_str(x.dst, y.dst)) return r;
      if (int r = cmp_str(x.src, y.src)) return r;
      if (int r = cmp_vec(x.statements, y.statements,
                          [](const Statement& s, const Statement& t) { return compare(s, t); }))
        return r;
      if (int r = cmp_vec(x.var_values, y.var_values,
                          [](const std::pair<std::string, std::string>& s,
                             const std::pair<std::string, std::string>& t) {
                            if (int q = cmp_str(s.first, t.first)) return q;
                            return cmp_str(s.second, t.second);
                          }))
        return r;
      return cmp_vec(x.const_items, y.const_items, cmp_str);
    }
    case 3: {
      const auto& x = std::get<ComputeEvent>(a);
      const auto& y = std::get<ComputeEvent>(b);
      if (int r = cmp_vec(x.group, y.group, cmp_str)) return r;
      if (int r = cmp_str(x.target, y.target)) return r;
      return compare(x.rhs, y.rhs);
    }
    case 4: {
      const auto& x = std::get<VerifyEvent>(a);
      const auto& y = std::get<VerifyEvent>(b);
      if (int r = cmp_str(x.comp, y.comp)) return r;
      return compare(x.statement, y.statement);
    }
    default:
      return 0;  // session / reset carry no data
  }
}

std::string to_string(const Event& e) {
  std::string out;
  if (const auto* h = std::get_if<HasEvent>(&e)) {
    out = "has\t" + h->comp + "\t" + h->var + "\t" + h->value;
  } else if (const auto* hc = std::get_if<HasConstEvent>(&e)) {
    out = "hasconst\t" + hc->comp + "\t" + hc->konst;
  } else if (const auto* r = std::get_if<ReceiveEvent>(&e)) {
    out = "receive\t" + r->dst + "\t" + r->src + "\t" + std::to_string(r->statements.size());
    for (const Statement& st : r->statements) out += "\t" + to_string(st);
    std::vector<std::string> assigns;
    for (const auto& [var, value] : r->var_values) assigns.push_back(var + "=" + value);
    for (const std::string& konst : r->const_items) assigns.push_back(konst);
    out += "\t" + (assigns.empty() ? std::string("-") : join(assigns, ","));
  } else if (const auto* c = std::get_if<ComputeEvent>(&e)) {
    out = "compute\t" + join(c->group, ",") + "\t" + c->target + "\t" + to_string(c->rhs);
  } else if (const auto* v = std::get_if<VerifyEvent>(&e)) {
    out = "verify\t" + v->comp + "\t" + to_string(v->statement);
  } else if (std::holds_alternative<SessionEvent>(e)) {
    out = "session";
  } else {
    out = "reset";
  }
  return out;
}

// --- states ------------------------------------------------------------------

GlobalState initial_state(const Architecture& arch) {
  GlobalState st;
  st.session = 1;
  for (const ComponentId& c : arch.components) {
    ComponentState cs;
    for (const VariableDecl& v : arch.variables) cs.vars[v.name] = {std::nullopt};
    for (const std::string& k : arch.constants) cs.consts[k] = {std::nullopt};
    st.components[c] = std::move(cs);
  }
  return st;
}

GlobalState step_event(const Event& e, GlobalState state, const Architecture& arch) {
  Stepper stepper{arch, std::move(state)};
  std::visit(stepper, e);
  return std::move(stepper.st);
}

GlobalState run_trace(const Trace& t, const Architecture& arch) {
  GlobalState st = initial_state(arch);
  for (const Event& e : t) st = step_event(e, std::move(st), arch);
  return st;
}

std::size_t defined_count(const GlobalState& s, const ComponentId& comp,
                          const std::string& var) {
  auto it = s.components.find(comp);
  if (it == s.components.end() || it->second.error) return 0;
  auto vt = it->second.vars.find(var);
  return vt == it->second.vars.end() ? 0 : count_defined(vt->second);
}

bool const_defined(const GlobalState& s, const ComponentId& comp,
                   const std::string& konst) {
  auto it = s.components.find(comp);
  if (it == s.components.end() || it->second.error) return false;
  auto ct = it->second.consts.find(konst);
  return ct != it->second.consts.end() && !ct->second.empty() &&
         ct->second.back().has_value();
}

const std::string* last_defined(const GlobalState& s, const ComponentId& comp,
                                const std::string& var) {
  auto it = s.components.find(comp);
  if (it == s.components.end() || it->second.error) return nullptr;
  auto vt = it->second.vars.find(var);
  if (vt == it->second.vars.end()) return nullptr;
  for (auto slot = vt->second.rbegin(); slot != vt->second.rend(); ++slot)
    if (*slot) return &**slot;
  return nullptr;
}

bool compute_would_succeed(const GlobalState& s, const ComputeEvent& e) {
  std::vector<const ComponentState*> participants;
  for (const ComponentId& c : e.group) {
    auto it = s.components.find(c);
    if (it == s.components.end()) bad_event("unknown component '" + c + "'");
    if (!it->second.error) participants.push_back(&it->second);
  }
  if (participants.empty()) return true;  // everybody ignores the event
  for (const ComponentState* cs : participants)
    if (!member_satisfies(*cs, e.rhs)) return false;
  return consts_available(participants, e.rhs);
}

// --- compatibility -----------------------------------------------------------

namespace {

// Items carried by a receive event, normalised for comparison with a
// primitive's item list (tokens do not matter for matching).
std::vector<Item> event_items(const ReceiveEvent& e) {
  std::vector<Item> items;
  for (const auto& [var, value] : e.var_values) items.push_back(VarItem{var});
  for (const std::string& konst : e.const_items) items.push_back(ConstItem{konst});
  std::sort(items.begin(), items.end());
  return items;
}

std::vector<Item> sorted_items(const std::vector<Item>& items) {
  std::vector<Item> out = items;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

// True iff the event is an instantiation of the primitive (multiplicities are
// accounted separately).
bool detail::instantiates(const Event& e, const Primitive& p) {
  if (const auto* h = std::get_if<HasEvent>(&e)) {
    const auto* prim = std::get_if<HasVarPrim>(&p);
    return prim && prim->comp == h->comp && prim->var == h->var;
  }
  if (const auto* hc = std::get_if<HasConstEvent>(&e)) {
    const auto* prim = std::get_if<HasConstPrim>(&p);
    return prim && prim->comp == hc->comp && prim->konst == hc->konst;
  }
  if (const auto* r = std::get_if<ReceiveEvent>(&e)) {
    const auto* prim = std::get_if<ReceivePrim>(&p);
    return prim && prim->dst == r->dst && prim->src == r->src &&
           prim->statements == r->statements &&
           sorted_items(prim->items) == event_items(*r);
  }
  if (const auto* c = std::get_if<ComputeEvent>(&e)) {
    const auto* prim = std::get_if<ComputePrim>(&p);
    return prim && prim->group == c->group && prim->target == c->target &&
           prim->rhs == c->rhs;
  }
  if (const auto* v = std::get_if<VerifyEvent>(&e)) {
    const auto* prim = std::get_if<VerifyPrim>(&p);
    return prim && prim->comp == v->comp && prim->statement == v->statement;
  }
  return false;
}

void detail::charge_event(const Architecture& arch, const Event& e,
                          std::vector<std::uint64_t>& used) {
  if (std::holds_alternative<SessionEvent>(e)) return;
  if (std::holds_alternative<ResetEvent>(e)) {
    std::fill(used.begin(), used.end(), 0);
    return;
  }
  for (std::size_t p = 0; p < arch.primitives.size(); ++p) {
    if (!detail::instantiates(e, arch.primitives[p])) continue;
    std::optional<Multiplicity> mult = primitive_multiplicity(arch.primitives[p]);
    if (!mult || mult->is_infinite() || used[p] < mult->value()) {
      ++used[p];
      return;
    }
  }
}

CompatibilityResult is_compatible(const Trace& t, const Architecture& arch) {
  std::vector<std::uint64_t> used(arch.primitives.size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Event& e = t[i];
    if (std::holds_alternative<SessionEvent>(e)) continue;
    if (std::holds_alternative<ResetEvent>(e)) {
      if (!arch.has_reset())
        return {false, i, "reset event, but the architecture has no reset primitive"};
      std::fill(used.begin(), used.end(), 0);
      continue;
    }
    bool matched_any = false;
    bool charged = false;
    for (std::size_t p = 0; p < arch.primitives.size(); ++p) {
      if (!detail::instantiates(e, arch.primitives[p])) continue;
      matched_any = true;
      std::optional<Multiplicity> mult = primitive_multiplicity(arch.primitives[p]);
      if (!mult || mult->is_infinite() || used[p] < mult->value()) {
        ++used[p];
        charged = true;
        break;
      }
    }
    if (charged) continue;
    if (matched_any)
      return {false, i, "multiplicity exhausted: " + to_string(e)};
    if (std::holds_alternative<ComputeEvent>(e)) continue;  // own arithmetic, uncharged
    return {false, i, "no architectural primitive licenses: " + to_string(e)};
  }
  return {};
}

// --- text format -------------------------------------------------------------

std::string serialize_trace(const Trace& t) {
  std::string out;
  for (const Event& e : t) {
    out += to_string(e);
    out += '\n';
  }
  return out;
}

namespace {

[[noreturn]] void bad_line(std::size_t lineno, const std::string& what) {
  throw std::invalid_argument("trace line " + std::to_string(lineno) + ": " + what);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

void check_token(std::size_t lineno, const std::string& tok) {
  if (tok.empty()) bad_line(lineno, "empty token");
  if (tok.find_first_of("\t\n,=") != std::string::npos)
    bad_line(lineno, "token contains a reserved character: " + tok);
}

const ComponentId& need_component(std::size_t lineno, const Architecture& arch,
                                  const std::string& name) {
  for (const ComponentId& c : arch.components)
    if (c == name) return c;
  bad_line(lineno, "unknown component '" + name + "'");
}

}  // namespace

Trace parse_trace(const std::string& text, const Architecture& arch) {
  Trace trace;
  std::vector<std::string> lines = split(text, '\n');
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    std::size_t lineno = li + 1;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = split(line, '\t');
    const std::string& kind = f[0];
    auto arity = [&](std::size_t n) {
      if (f.size() != n)
        bad_line(lineno, "expected " + std::to_string(n - 1) + " field(s) after '" +
                             kind + "'");
    };
    if (kind == "session") {
      arity(1);
      trace.push_back(SessionEvent{});
    } else if (kind == "reset") {
      arity(1);
      trace.push_back(ResetEvent{});
    } else if (kind == "has") {
      arity(4);
      need_component(lineno, arch, f[1]);
      if (!arch.find_variable(f[2])) bad_line(lineno, "unknown variable '" + f[2] + "'");
      check_token(lineno, f[3]);
      trace.push_back(HasEvent{f[1], f[2], f[3]});
    } else if (kind == "hasconst") {
      arity(3);
      need_component(lineno, arch, f[1]);
      if (!arch.has_constant(f[2])) bad_line(lineno, "unknown constant '" + f[2] + "'");
      trace.push_back(HasConstEvent{f[1], f[2]});
    } else if (kind == "verify") {
      arity(3);
      need_component(lineno, arch, f[1]);
      try {
        trace.push_back(VerifyEvent{
            f[1], resolve_statement_names(parse_statement_text(f[2]), arch)});
      } catch (const std::exception& ex) {
        bad_line(lineno, ex.what());
      }
    } else if (kind == "compute") {
      arity(4);
      ComputeEvent ev;
      for (const std::string& m : split(f[1], ','))
        ev.group.push_back(need_component(lineno, arch, m));
      if (!arch.find_variable(f[2])) bad_line(lineno, "unknown variable '" + f[2] + "'");
      ev.target = f[2];
      try {
        ev.rhs = resolve_term_names(parse_term_text(f[3]), arch);
      } catch (const std::exception& ex) {
        bad_line(lineno, ex.what());
      }
      trace.push_back(std::move(ev));
    } else if (kind == "receive") {
      if (f.size() < 4) bad_line(lineno, "receive needs dst, src, count, assignments");
      ReceiveEvent ev;
      ev.dst = need_component(lineno, arch, f[1]);
      ev.src = need_component(lineno, arch, f[2]);
      std::size_t nstmt = 0;
      try {
        std::size_t consumed = 0;
        nstmt = std::stoull(f[3], &consumed);
        if (consumed != f[3].size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        bad_line(lineno, "bad statement count '" + f[3] + "'");
      }
      if (f.size() != 5 + nstmt)
        bad_line(lineno, "expected " + std::to_string(nstmt) +
                             " statement field(s) plus assignments");
      for (std::size_t s = 0; s < nstmt; ++s) {
        try {
          ev.statements.push_back(
              resolve_statement_names(parse_statement_text(f[4 + s]), arch));
        } catch (const std::exception& ex) {
          bad_line(lineno, ex.what());
        }
      }
      const std::string& assigns = f[4 + nstmt];
      if (assigns != "-") {
        for (const std::string& entry : split(assigns, ',')) {
          std::size_t eq = entry.find('=');
          if (eq == std::string::npos) {
            if (!arch.has_constant(entry))
              bad_line(lineno, "unknown constant item '" + entry + "'");
            ev.const_items.push_back(entry);
          } else {
            std::string var = entry.substr(0, eq);
            std::string value = entry.substr(eq + 1);
            if (!arch.find_variable(var))
              bad_line(lineno, "unknown variable item '" + var + "'");
            check_token(lineno, value);
            ev.var_values.emplace_back(std::move(var), std::move(value));
          }
        }
      }
      trace.push_back(std::move(ev));
    } else {
      bad_line(lineno, "unknown event kind '" + kind + "'");
    }
  }
  return trace;
}

std::string describe_state(const GlobalState& s) {
  std::ostringstream out;
  out << "session " << s.session << "\n";
  for (const auto& [name, cs] : s.components) {
    if (cs.error) {
      out << name << ": Error\n";
      continue;
    }
    out << name << ":\n";
    auto render_slots = [&](const std::vector<Value>& slots) {
      std::vector<std::string> parts;
      parts.reserve(slots.size());
      for (const Value& v : slots) parts.push_back(v ? *v : "-");
      return "[" + join(parts, ", ") + "]";
    };
    for (const auto& [var, slots] : cs.vars)
      out << "  var " << var << " = " << render_slots(slots) << "\n";
    for (const auto& [konst, slots] : cs.consts)
      out << "  const " << konst << " = " << render_slots(slots) << "\n";
    for (const Equation& eq : cs.knowledge) out << "  knows " << to_string(eq) << "\n";
  }
  return out.str();
}

}  // namespace archproof
