// Seeded pseudo-random generation of compatible traces.  One mt19937_64
// stream drives every draw, so a (count, max_len, seed) triple yields
// byte-identical traces on every platform.
#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "archproof/trace.hpp"

namespace archproof {

std::vector<Trace> sample_traces(const Architecture& arch, std::size_t count,
                                 std::size_t max_len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // mt19937_64 output is standardised, and the slight modulo bias is
  // irrelevant here, so `%` keeps draws portable without extra machinery.
  auto draw = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  const std::vector<Primitive>& prims = arch.primitives;
  constexpr std::ptrdiff_t kSession = -1;

  std::vector<Trace> out;
  out.reserve(count);
  for (std::size_t ti = 0; ti < count; ++ti) {
    Trace trace;
    GlobalState st = initial_state(arch);
    std::vector<std::uint64_t> used(prims.size(), 0);
    std::uint64_t fresh = 0;
    std::size_t length = max_len == 0 ? 0 : 1 + draw(max_len);
    for (std::size_t step = 0; step < length; ++step) {
      std::vector<std::ptrdiff_t> actions;
      for (std::size_t p = 0; p < prims.size(); ++p) {
        if (std::holds_alternative<TrustPrim>(prims[p])) continue;
        std::optional<Multiplicity> mult = primitive_multiplicity(prims[p]);
        if (mult && !mult->is_infinite() && used[p] >= mult->value()) continue;
        if (const auto* cp = std::get_if<ComputePrim>(&prims[p])) {
          // Fire computations only once their inputs are ready, so sampled
          // executions never reach Error.
          ComputeEvent ev{cp->group, cp->target, cp->rhs};
          bool ready = compute_would_succeed(st, ev);
          for (const ComponentId& m : cp->group)
            ready = ready && !st.components.at(m).error;
          if (!ready) continue;
        }
        actions.push_back(static_cast<std::ptrdiff_t>(p));
      }
      actions.push_back(kSession);

      std::ptrdiff_t pick = actions[draw(actions.size())];
      Event e;
      if (pick == kSession) {
        e = SessionEvent{};
      } else {
        std::size_t p = static_cast<std::size_t>(pick);
        if (const auto* h = std::get_if<HasVarPrim>(&prims[p])) {
          e = HasEvent{h->comp, h->var, "t" + std::to_string(fresh++)};
        } else if (const auto* hc = std::get_if<HasConstPrim>(&prims[p])) {
          e = HasConstEvent{hc->comp, hc->konst};
        } else if (const auto* rp = std::get_if<ReceivePrim>(&prims[p])) {
          ReceiveEvent ev{rp->dst, rp->src, rp->statements, {}, {}};
          for (const Item& item : rp->items) {
            if (const auto* v = std::get_if<VarItem>(&item)) {
              const std::string* val = last_defined(st, rp->src, v->var);
              ev.var_values.emplace_back(v->var,
                                         val ? *val : "t" + std::to_string(fresh++));
            } else {
              ev.const_items.push_back(std::get<ConstItem>(item).name);
            }
          }
          e = std::move(ev);
        } else if (const auto* cp = std::get_if<ComputePrim>(&prims[p])) {
          e = ComputeEvent{cp->group, cp->target, cp->rhs};
        } else if (const auto* vp = std::get_if<VerifyPrim>(&prims[p])) {
          e = VerifyEvent{vp->comp, vp->statement};
        } else {
          e = ResetEvent{};
          std::fill(used.begin(), used.end(), 0);
        }
        if (!std::holds_alternative<ResetEvent>(e)) ++used[p];
      }
      st = step_event(e, std::move(st), arch);
      trace.push_back(std::move(e));
    }
    out.push_back(std::move(trace));
  }
  return out;
}

}  // namespace archproof
