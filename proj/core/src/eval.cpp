// Empirical property evaluation over executions: possession by state
// inspection of covering and sampled traces, knowledge by greedy same-session
// extension plus deductive/equational closure.
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "archproof/trace.hpp"
#include "term_ops.hpp"
#include "trace_detail.hpp"

namespace archproof {
namespace {

// Closure of a knowledge state under the architecture's deductive rules and
// equational reasoning (symmetry, transitivity, congruent substitution),
// confined to the subterm universe of the known equations and the target so
// the closure stays finite.
std::set<Equation> close_knowledge(std::set<Equation> know, const Architecture& arch,
                                   const ComponentId& comp, const Equation& target) {
  std::set<Term> universe;
  auto add_terms = [&](const Equation& eq) {
    detail::collect_subterms(eq.args[0], universe);
    detail::collect_subterms(eq.args[1], universe);
  };
  for (const Equation& eq : know) add_terms(eq);
  add_terms(target);
  auto in_universe = [&](const Equation& eq) {
    return universe.count(eq.args[0]) > 0 && universe.count(eq.args[1]) > 0;
  };

  std::size_t cap = 4 + 2 * universe.size() * universe.size();
  for (std::size_t round = 0; round < cap; ++round) {
    std::size_t before = know.size();

    for (const DeductiveRule& rule : arch.rules) {
      if (rule.owner && *rule.owner != comp) continue;
      std::vector<std::map<std::string, Term>> subs{{}};
      for (const Equation& premise : rule.premises) {
        std::vector<std::map<std::string, Term>> next;
        for (const auto& sub : subs) {
          for (const Equation& candidate : know) {
            std::map<std::string, Term> extended = sub;
            if (detail::match_equation(premise, candidate, extended))
              next.push_back(std::move(extended));
          }
        }
        subs = std::move(next);
        if (subs.empty()) break;
      }
      for (const auto& sub : subs) {
        Equation conclusion = detail::subst_equation(rule.conclusion, sub);
        if (detail::term_is_ground(conclusion.args[0]) &&
            detail::term_is_ground(conclusion.args[1]) && in_universe(conclusion))
          know.insert(std::move(conclusion));
      }
    }

    std::vector<Equation> snapshot(know.begin(), know.end());
    for (const Equation& eq : snapshot)
      if (eq.pred == Pred::eq)
        know.insert(Equation{Pred::eq, {eq.args[1], eq.args[0]}});

    snapshot.assign(know.begin(), know.end());
    for (const Equation& a : snapshot) {
      if (a.pred != Pred::eq) continue;
      for (const Equation& b : snapshot) {
        if (b.pred != Pred::eq || !(a.args[1] == b.args[0])) continue;
        if (a.args[0] == b.args[1]) continue;  // nothing new in x = x
        know.insert(Equation{Pred::eq, {a.args[0], b.args[1]}});
      }
    }

    snapshot.assign(know.begin(), know.end());
    for (const Equation& rule_eq : snapshot) {
      if (rule_eq.pred != Pred::eq || rule_eq.args[0] == rule_eq.args[1]) continue;
      for (const Equation& host : snapshot) {
        Equation rewritten{
            host.pred,
            {detail::rewrite_term(host.args[0], rule_eq.args[0], rule_eq.args[1]),
             detail::rewrite_term(host.args[1], rule_eq.args[0], rule_eq.args[1])}};
        if (!(rewritten == host) && in_universe(rewritten))
          know.insert(std::move(rewritten));
      }
    }

    if (know.size() == before) break;
  }
  return know;
}

struct TraceSets {
  std::optional<Trace> covering;  // absent when construction fails
  std::vector<Trace> samples;
};

TraceSets make_traces(const Architecture& arch, const SemanticBudget& budget) {
  TraceSets out;
  try {
    out.covering = covering_trace(arch);
  } catch (const std::runtime_error&) {
    // cyclic computations: fall back to sampling only
  }
  out.samples = sample_traces(arch, budget.samples, budget.max_len, budget.seed);
  return out;
}

// Walks a trace and reports the first prefix state satisfying `hit`
// (including the initial state).
template <typename F>
bool trace_reaches(const Trace& trace, const Architecture& arch, F&& hit) {
  GlobalState st = initial_state(arch);
  if (hit(st)) return true;
  for (const Event& e : trace) {
    st = step_event(e, std::move(st), arch);
    if (hit(st)) return true;
  }
  return false;
}

template <typename F>
std::optional<Trace> find_reaching_trace(const TraceSets& traces,
                                         const Architecture& arch, F&& hit) {
  if (traces.covering && trace_reaches(*traces.covering, arch, hit))
    return traces.covering;
  for (const Trace& t : traces.samples)
    if (trace_reaches(t, arch, hit)) return t;
  return std::nullopt;
}

std::string budget_text(const TraceSets& traces) {
  return std::to_string(traces.samples.size() + (traces.covering ? 1 : 0)) +
         " executions";
}

SemanticVerdict eval_know(const Architecture& arch, const PropKnow& prop,
                          const TraceSets& traces) {
  if (!arch.has_component(prop.comp))
    throw std::invalid_argument("unknown component: " + prop.comp);

  // From this state, fire everything still affordable in the current session
  // and test whether the closure reaches the target equation.
  auto state_derives = [&](const GlobalState& st, std::vector<std::uint64_t> used) {
    const ComponentState& cs = st.components.at(prop.comp);
    if (cs.error) return true;  // aborted sessions are not counterexamples
    GlobalState extended = st;
    Trace scratch;
    detail::greedy_round(arch, extended, used, "#x", scratch);
    std::set<Equation> know = extended.components.at(prop.comp).knowledge;
    return close_knowledge(std::move(know), arch, prop.comp, prop.eq)
               .count(prop.eq) > 0;
  };

  // Knowledge must be re-derivable in every session, so test the states where
  // it is weakest: right after every session/reset boundary, plus the final
  // state.
  std::size_t checked = 0;
  auto refuting_index = [&](const Trace& trace) -> std::optional<std::size_t> {
    GlobalState st = initial_state(arch);
    std::vector<std::uint64_t> used(arch.primitives.size(), 0);
    ++checked;
    if (!state_derives(st, used)) return 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const Event& e = trace[i];
      st = step_event(e, std::move(st), arch);
      detail::charge_event(arch, e, used);
      bool boundary = std::holds_alternative<SessionEvent>(e) ||
                      std::holds_alternative<ResetEvent>(e) || i + 1 == trace.size();
      if (!boundary) continue;
      ++checked;
      if (!state_derives(st, used)) return i + 1;
    }
    return std::nullopt;
  };

  auto refute = [&](const Trace& trace, std::size_t after) {
    SemanticVerdict v;
    v.outcome = SemanticOutcome::refuted;
    v.witness = trace;
    v.detail = "no same-session derivation from the state after " +
               std::to_string(after) + " event(s)";
    return v;
  };

  if (traces.covering)
    if (auto idx = refuting_index(*traces.covering)) return refute(*traces.covering, *idx);
  for (const Trace& t : traces.samples)
    if (auto idx = refuting_index(t)) return refute(t, *idx);

  SemanticVerdict v;
  v.outcome = SemanticOutcome::witnessed;
  v.witness = traces.covering;
  v.detail = "derivable (greedy extension + closure) in all " +
             std::to_string(checked) + " session-boundary states of " +
             budget_text(traces);
  return v;
}

}  // namespace

SemanticVerdict eval_property_semantic(const Architecture& arch, const Property& prop,
                                       const SemanticBudget& budget) {
  if (const auto* conj = std::get_if<PropConj>(&prop.node)) {
    SemanticVerdict combined;
    combined.outcome = SemanticOutcome::witnessed;
    std::string details;
    for (std::size_t i = 0; i < conj->parts.size(); ++i) {
      SemanticVerdict part = eval_property_semantic(arch, conj->parts[i], budget);
      if (!details.empty()) details += "; ";
      details += "part " + std::to_string(i + 1) + ": " + part.detail;
      if (part.outcome == SemanticOutcome::refuted) {
        part.detail = details;
        return part;
      }
      if (part.outcome == SemanticOutcome::inconclusive)
        combined.outcome = SemanticOutcome::inconclusive;
      else if (!combined.witness)
        combined.witness = part.witness;
    }
    combined.detail = details;
    if (combined.outcome == SemanticOutcome::inconclusive) combined.witness.reset();
    return combined;
  }

  TraceSets traces = make_traces(arch, budget);

  if (const auto* h = std::get_if<PropHasVar>(&prop.node)) {
    auto hit = [&](const GlobalState& st) {
      return defined_count(st, h->comp, h->var) >= h->count;
    };
    SemanticVerdict v;
    if (auto witness = find_reaching_trace(traces, arch, hit)) {
      v.outcome = SemanticOutcome::witnessed;
      v.witness = std::move(witness);
      v.detail = "a state holds " + std::to_string(h->count) +
                 " defined value(s) of '" + h->var + "' at " + h->comp;
    } else {
      v.outcome = SemanticOutcome::inconclusive;
      v.detail = "no state reached the required count across " + budget_text(traces);
    }
    return v;
  }

  if (const auto* hc = std::get_if<PropHasConst>(&prop.node)) {
    auto hit = [&](const GlobalState& st) {
      return const_defined(st, hc->comp, hc->konst);
    };
    SemanticVerdict v;
    if (auto witness = find_reaching_trace(traces, arch, hit)) {
      v.outcome = SemanticOutcome::witnessed;
      v.witness = std::move(witness);
      v.detail = "a state defines constant '" + hc->konst + "' at " + hc->comp;
    } else {
      v.outcome = SemanticOutcome::inconclusive;
      v.detail = "constant never defined across " + budget_text(traces);
    }
    return v;
  }

  if (const auto* n = std::get_if<PropHasNoneVar>(&prop.node)) {
    auto hit = [&](const GlobalState& st) {
      return defined_count(st, n->comp, n->var) >= 1;
    };
    SemanticVerdict v;
    if (auto witness = find_reaching_trace(traces, arch, hit)) {
      v.outcome = SemanticOutcome::refuted;
      v.witness = std::move(witness);
      v.detail = "an execution assigns '" + n->var + "' at " + n->comp;
    } else {
      v.outcome = SemanticOutcome::inconclusive;
      v.detail = "no assignment observed across " + budget_text(traces) +
                 " (sampling cannot prove absence)";
    }
    return v;
  }

  if (const auto* nc = std::get_if<PropHasNoneConst>(&prop.node)) {
    auto hit = [&](const GlobalState& st) {
      return const_defined(st, nc->comp, nc->konst);
    };
    SemanticVerdict v;
    if (auto witness = find_reaching_trace(traces, arch, hit)) {
      v.outcome = SemanticOutcome::refuted;
      v.witness = std::move(witness);
      v.detail = "an execution defines constant '" + nc->konst + "' at " + nc->comp;
    } else {
      v.outcome = SemanticOutcome::inconclusive;
      v.detail = "no assignment observed across " + budget_text(traces) +
                 " (sampling cannot prove absence)";
    }
    return v;
  }

  return eval_know(arch, std::get<PropKnow>(prop.node), traces);
}

}  // namespace archproof
