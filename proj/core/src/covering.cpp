// Deterministic covering traces: one session per unit of the architecture's
// uniform bound, each session firing every affordable primitive once with
// sources ordered before sinks.
#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "archproof/trace.hpp"
#include "trace_detail.hpp"

namespace archproof {
namespace {

// Deepest history request in a right-hand side (x^h needs h prior sessions).
std::uint64_t max_history(const Term& t) {
  if (const auto* v = std::get_if<VariableRef>(&t.node)) return v->history;
  std::uint64_t deepest = 1;
  if (const auto* a = std::get_if<Apply>(&t.node))
    for (const Term& arg : a->args) deepest = std::max(deepest, max_history(arg));
  return deepest;
}

}  // namespace

void detail::greedy_round(const Architecture& arch, GlobalState& st,
                          std::vector<std::uint64_t>& used,
                          const std::string& token_tag, Trace& out) {
  const std::vector<Primitive>& prims = arch.primitives;
  std::vector<bool> fired(prims.size(), false);
  std::vector<bool> dep_fired(arch.deps.size(), false);
  auto capacity = [&](std::size_t p) {
    std::optional<Multiplicity> mult = primitive_multiplicity(prims[p]);
    return !mult || mult->is_infinite() || used[p] < mult->value();
  };
  auto emit = [&](std::size_t p, Event e) {
    st = step_event(e, std::move(st), arch);
    out.push_back(std::move(e));
    ++used[p];
    fired[p] = true;
  };
  auto receive_ready = [&](const ReceivePrim& rp) {
    for (const Item& item : rp.items)
      if (const auto* v = std::get_if<VarItem>(&item))
        if (!last_defined(st, rp.src, v->var)) return false;
    return true;
  };
  auto make_receive = [&](const ReceivePrim& rp) {
    ReceiveEvent ev{rp.dst, rp.src, rp.statements, {}, {}};
    for (const Item& item : rp.items) {
      if (const auto* v = std::get_if<VarItem>(&item)) {
        const std::string* val = last_defined(st, rp.src, v->var);
        ev.var_values.emplace_back(v->var, val ? *val : v->var + token_tag + "~");
      } else {
        ev.const_items.push_back(std::get<ConstItem>(item).name);
      }
    }
    return ev;
  };

  // Sources first: measurements and constant lookups.
  for (std::size_t p = 0; p < prims.size(); ++p) {
    if (!capacity(p)) continue;
    if (const auto* h = std::get_if<HasVarPrim>(&prims[p]))
      emit(p, HasEvent{h->comp, h->var, h->var + token_tag});
    else if (const auto* hc = std::get_if<HasConstPrim>(&prims[p]))
      emit(p, HasConstEvent{hc->comp, hc->konst});
  }

  // Then everything else as its inputs become defined.
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t p = 0; p < prims.size(); ++p) {
      if (fired[p] || !capacity(p)) continue;
      if (const auto* vp = std::get_if<VerifyPrim>(&prims[p])) {
        emit(p, VerifyEvent{vp->comp, vp->statement});
        progress = true;
      } else if (const auto* rp = std::get_if<ReceivePrim>(&prims[p])) {
        if (receive_ready(*rp)) {
          emit(p, make_receive(*rp));
          progress = true;
        }
      } else if (const auto* cp = std::get_if<ComputePrim>(&prims[p])) {
        ComputeEvent ev{cp->group, cp->target, cp->rhs};
        if (compute_would_succeed(st, ev)) {
          emit(p, std::move(ev));
          progress = true;
        }
      }
    }
    // Realise dependence relations as the owner's own computations: an
    // uncharged compute whose inputs mirror the relation's needs (x^n for a
    // premise needing n values).  This is what makes possession derived
    // through dependences observable in executions.  A relation fires only
    // when its target still lacks a value this session, and never for
    // premises with an infinite need (no finite execution meets those).
    for (std::size_t d = 0; d < arch.deps.size(); ++d) {
      if (dep_fired[d]) continue;
      const DepEntry& dep = arch.deps[d];
      if (dep.target_is_const) continue;  // constants have fixed values
      auto comp_it = st.components.find(dep.owner);
      if (comp_it == st.components.end() || comp_it->second.error) continue;
      auto slot_it = comp_it->second.vars.find(dep.target);
      if (slot_it == comp_it->second.vars.end() || slot_it->second.back()) continue;
      bool feasible = true;
      Apply rhs{"derive", {}};
      for (const DepPremise& premise : dep.premises) {
        if (premise.is_const) {
          rhs.args.push_back(Term::constant(premise.subject));
        } else if (premise.need.is_infinite()) {
          feasible = false;
          break;
        } else {
          rhs.args.push_back(
              Term(VariableRef{premise.subject, {}, premise.need.value()}));
        }
      }
      if (!feasible) continue;
      ComputeEvent ev{{dep.owner}, dep.target, Term(std::move(rhs))};
      if (!compute_would_succeed(st, ev)) continue;
      st = step_event(ev, std::move(st), arch);
      out.push_back(std::move(ev));
      dep_fired[d] = true;
      progress = true;
    }
    if (!progress) {
      // Unstick the first receive whose source never obtains an item.
      for (std::size_t p = 0; p < prims.size(); ++p) {
        if (fired[p] || !capacity(p)) continue;
        if (const auto* rp = std::get_if<ReceivePrim>(&prims[p])) {
          emit(p, make_receive(*rp));
          progress = true;
          break;
        }
      }
    }
  }
}

Trace covering_trace(const Architecture& arch) {
  ConsistencyReport report = check_consistency(arch);
  if (!report.consistent())
    throw std::invalid_argument("covering trace needs a consistent architecture: " +
                                report.violations.front().message);
  std::uint64_t rounds = report.bound->is_infinite() ? 1 : report.bound->value();

  Trace trace;
  GlobalState st = initial_state(arch);
  std::vector<std::uint64_t> used(arch.primitives.size(), 0);
  if (arch.has_reset()) {
    Event e = ResetEvent{};
    st = step_event(e, std::move(st), arch);
    trace.push_back(std::move(e));
  }
  for (std::uint64_t r = 1; r <= rounds; ++r) {
    if (r > 1) {
      Event e = SessionEvent{};
      st = step_event(e, std::move(st), arch);
      trace.push_back(std::move(e));
    }
    detail::greedy_round(arch, st, used, "#" + std::to_string(r), trace);
  }

  // A computation that never fired despite enough sessions for its history
  // depth can only be waiting on its own (transitive) output.
  for (std::size_t p = 0; p < arch.primitives.size(); ++p) {
    const auto* cp = std::get_if<ComputePrim>(&arch.primitives[p]);
    if (cp && used[p] == 0 && max_history(cp->rhs) <= rounds)
      throw std::runtime_error(
          "covering trace: computations feed each other cyclically (target '" +
          cp->target + "')");
  }
  return trace;
}

}  // namespace archproof
