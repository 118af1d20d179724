// Internal helpers shared between the trace modules (compatibility matching,
// greedy event generation).  Not installed.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "archproof/trace.hpp"

namespace archproof::detail {

// True iff the event is an instantiation of the primitive; multiplicities are
// accounted separately.
bool instantiates(const Event& e, const Primitive& p);

// Charges one event against the primitive use counters the way is_compatible
// does: the first matching primitive with remaining capacity gains a use;
// resets clear every counter; sessions and unmatched computations are free.
void charge_event(const Architecture& arch, const Event& e,
                  std::vector<std::uint64_t>& used);

// Fires every affordable non-Trust primitive at most once, in declaration
// order, against the running state: measurements and constant lookups first,
// then receives/verifications/computations as their inputs become defined
// (receives whose source lacks an item fall back to a fresh token).
// Dependence relations fire as uncharged owner-local computations once their
// premises are met, making dependence-derived possession observable.  Emitted
// events are appended to `out`, applied to `st`, and charged to `used`.
// `token_tag` namespaces the fresh tokens (e.g. "#3" for session three).
void greedy_round(const Architecture& arch, GlobalState& st,
                  std::vector<std::uint64_t>& used, const std::string& token_tag,
                  Trace& out);

}  // namespace archproof::detail
