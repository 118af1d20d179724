// Executable trace semantics: events, per-component states, the step
// function, trace compatibility, covering-trace construction, seeded trace
// sampling, and empirical (trace-level) property evaluation.
//
// Values are opaque tokens; ⊥ ("not yet defined") is std::nullopt.  Each
// variable and constant holds one slot per session; assignments replace the
// last slot.  Computations evaluate right-hand sides over tokens by building
// a fingerprint string (e.g. "Mu(t1;bs#1;THR)"), so two computations agree
// exactly when their inputs agree syntactically.  Fingerprints use ';' as the
// argument separator so that they survive the trace text format, whose
// receive assignments are comma-separated.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "archproof/arch.hpp"

namespace archproof {

using Value = std::optional<std::string>;  // nullopt = undefined

// ---------------------------------------------------------------------------
// Events.
// ---------------------------------------------------------------------------

// Component `comp` measures/creates variable `var`; the token is the value
// observed.  Instantiates a `has` primitive for that variable.
struct HasEvent {
  ComponentId comp;
  std::string var;
  std::string value;
};

// Component `comp` looks up constant `konst`; constants have a fixed
// interpretation, so the assigned value is the constant's own name.
struct HasConstEvent {
  ComponentId comp;
  std::string konst;
};

// `dst` receives a message from `src` carrying the given statements and item
// values.  `var_values` assigns a token to each variable item; constant items
// are listed by name (their value is fixed).  Statements ride along for the
// receiver to verify later; receiving alone adds no knowledge.
struct ReceiveEvent {
  ComponentId dst;
  ComponentId src;
  std::vector<Statement> statements;
  std::vector<std::pair<std::string, std::string>> var_values;
  std::vector<std::string> const_items;
};

// The group jointly computes `target = rhs`.  Each member must hold enough
// defined values for every right-hand-side reference (a reference x^h needs h
// defined entries; a constant must be defined); members that fall short go to
// Error and receive no assignment.  Members that pass all get the computed
// token in `target`'s last slot and learn the equation `target = rhs`.
struct ComputeEvent {
  std::vector<ComponentId> group;  // non-empty, declaration order
  std::string target;
  Term rhs;
};

// `comp` checks a statement's evidence.  Checking always succeeds on opaque
// tokens; what it adds to the knowledge state is trust-filtered: an
// attestation's claims are learned only if `comp` trusts the issuer, a
// proof's direct equations are always learned, and a proof's nested
// attestations are learned only if `comp` trusts the nested issuer.
struct VerifyEvent {
  ComponentId comp;
  Statement statement;
};

// Global session advance: every non-Error component appends an undefined slot
// to each variable, repeats the last slot of each constant, and drops all
// learned equations.  The session counter increments.
struct SessionEvent {};

// Full restart: every component (including Error ones) returns to the initial
// state and the per-segment use counters of compatibility checking restart.
struct ResetEvent {};

using Event = std::variant<HasEvent, HasConstEvent, ReceiveEvent, ComputeEvent,
                           VerifyEvent, SessionEvent, ResetEvent>;
using Trace = std::vector<Event>;

int compare(const Event& a, const Event& b);
inline bool operator==(const Event& a, const Event& b) { return compare(a, b) == 0; }
std::string to_string(const Event& e);  // one-line, tab-separated

// ---------------------------------------------------------------------------
// States.
// ---------------------------------------------------------------------------

struct ComponentState {
  bool error = false;  // once set, the component ignores everything but Reset
  // One slot per session for every declared variable / constant.
  std::map<std::string, std::vector<Value>> vars;
  std::map<std::string, std::vector<Value>> consts;
  // Equations learned this session (trust pairs live in the architecture and
  // never change, so they are not duplicated here).
  std::set<Equation> knowledge;
};

struct GlobalState {
  std::map<ComponentId, ComponentState> components;
  std::uint64_t session = 1;
};

// Every component with one undefined slot per variable/constant, session 1.
GlobalState initial_state(const Architecture& arch);

// One step of the semantics.  Events naming undeclared components, variables,
// or constants throw std::invalid_argument (use is_compatible to vet traces
// from outside).  Components in the Error state ignore every event except
// Reset.
GlobalState step_event(const Event& e, GlobalState state, const Architecture& arch);

// Left fold of step_event over the trace, starting from initial_state.
GlobalState run_trace(const Trace& t, const Architecture& arch);

// Number of defined (non-nullopt) entries of a variable; 0 if the component
// is in Error.  `const_defined` is the analogue for constants (their last
// slot).
std::size_t defined_count(const GlobalState& s, const ComponentId& comp,
                          const std::string& var);
bool const_defined(const GlobalState& s, const ComponentId& comp,
                   const std::string& konst);

// Most recent defined value of a variable, or nullptr (also for Error
// components).  The pointer is invalidated by the next state change.
const std::string* last_defined(const GlobalState& s, const ComponentId& comp,
                                const std::string& var);

// True iff applying the computation to `s` sends nobody to Error: every
// non-Error group member holds enough defined values for each right-hand-side
// reference and the constants involved are defined within the group.
bool compute_would_succeed(const GlobalState& s, const ComputeEvent& e);

// ---------------------------------------------------------------------------
// Compatibility.
// ---------------------------------------------------------------------------

struct CompatibilityResult {
  bool compatible = true;
  std::size_t violation_index = 0;  // 0-based position of the first offender
  std::string reason;               // empty when compatible
};

// A trace is compatible when every event except computations instantiates an
// architectural primitive (receives must match statements and items exactly;
// resets require a reset primitive), and no primitive is used more often
// between two resets than its multiplicity allows.  Computations matching a
// declared compute primitive are charged against its multiplicity; other
// computations are admitted without charge (the attacker's own arithmetic is
// not an architectural action).  Session events are free.
CompatibilityResult is_compatible(const Trace& t, const Architecture& arch);

// ---------------------------------------------------------------------------
// Covering traces and sampling.
// ---------------------------------------------------------------------------

// A deterministic trace that exercises every non-Trust primitive as often as
// the architecture's uniform bound allows: with a finite bound n, each
// primitive fires once per session across n sessions; with an infinite bound
// everything fires once.  Within a session, events run sources-before-sinks
// (has events, then receives/verifies/computes as their inputs become
// defined; a receive whose source never obtains an item falls back to a
// fresh token).  Dependence relations additionally fire as the owner's own
// uncharged computations once their premises are met, so possession that the
// relation licenses shows up in the run.  A reset primitive contributes one
// leading reset event.  Computations whose history depth exceeds the
// sessions elapsed so far are skipped in early sessions.  Throws
// std::invalid_argument if the architecture is inconsistent and
// std::runtime_error if computations feed each other cyclically.
Trace covering_trace(const Architecture& arch);

// `count` independent pseudo-random compatible traces of at most `max_len`
// events each, drawn from one deterministic stream: identical arguments give
// byte-identical traces on every platform.  Computations fire only when
// their inputs are ready, so sampled runs never reach Error.
std::vector<Trace> sample_traces(const Architecture& arch, std::size_t count,
                                 std::size_t max_len, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Empirical property evaluation.
// ---------------------------------------------------------------------------

enum class SemanticOutcome { witnessed, refuted, inconclusive };

struct SemanticVerdict {
  SemanticOutcome outcome = SemanticOutcome::inconclusive;
  std::optional<Trace> witness;  // witnessing / refuting trace when available
  std::string detail;            // one-line human-readable explanation
};

struct SemanticBudget {
  std::size_t samples = 1000;  // sampled traces
  std::size_t max_len = 64;    // events per sampled trace
  std::uint64_t seed = 1;
};

// Evaluates a property against executions:
//  - has:     witnessed if the covering trace or a sampled trace reaches a
//             state with enough defined entries; otherwise inconclusive.
//  - hasnone: refuted if any covering/sampled trace defines the subject at
//             the component; otherwise inconclusive (absence over all traces
//             is not decidable by sampling).
//  - knows:   checked at session boundaries of sampled traces: from each such
//             state, a greedy same-session extension fires every affordable
//             primitive and the resulting knowledge is closed under the
//             architecture's deductive rules and equational reasoning.
//             Refuted if some state admits no derivation; witnessed (up to
//             the budget) otherwise.  States where the component is in Error
//             are skipped.
//  - conjunctions evaluate all parts (worst outcome wins; refuted > inconclusive).
// The property must be resolved against `arch` (see resolve_property).
SemanticVerdict eval_property_semantic(const Architecture& arch, const Property& prop,
                                       const SemanticBudget& budget = {});

// ---------------------------------------------------------------------------
// Text format.
// ---------------------------------------------------------------------------

// One event per line, tab-separated:
//   has <comp> <var> <token>
//   hasconst <comp> <const>
//   receive <dst> <src> <k> <statement>*k <assignments>
//   compute <m1,m2,...> <target> <rhs>
//   verify <comp> <statement>
//   session
//   reset
// Receive assignments are "x=tok" / bare constant names joined with commas,
// or "-" when the message carries no items.  Tokens must not contain tab,
// newline, comma, or '='.
std::string serialize_trace(const Trace& t);

// Parses the format above, resolving statement/term names against the
// architecture.  Throws std::invalid_argument (with a line number) on
// malformed input or undeclared names.
Trace parse_trace(const std::string& text, const Architecture& arch);

// Deterministic multi-line rendering of a state (variables, constants, and
// learned equations per component; "-" marks undefined slots).
std::string describe_state(const GlobalState& s);

}  // namespace archproof
