// The fixed golden suite for the execution semantics: twelve named cases
// covering state shape, Session and Reset bookkeeping, computation failure,
// Error absorption, and trust-filtered verification.  Shared between the
// semantics unit tests and the acceptance gate so both check the same laws.
#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "archproof/dsl.hpp"
#include "archproof/trace.hpp"

namespace archproof::testing {

struct SemanticsCheck {
  std::string name;
  bool pass = true;
  std::string detail;  // first failing assertion, empty when pass
};

namespace detail_cases {

// Accumulates assertions; remembers the first failure.
struct Checker {
  SemanticsCheck result;
  explicit Checker(std::string name) { result.name = std::move(name); }
  void expect(bool cond, const std::string& what) {
    if (!cond && result.pass) {
      result.pass = false;
      result.detail = what;
    }
  }
};

inline const Architecture& fixture() {
  static const Architecture arch = parse_architecture(
      "component A;\n"
      "component B;\n"
      "component V;\n"
      "var x range 1;\n"
      "var y range 1;\n"
      "var z range 1;\n"
      "const K;\n"
      "fun F/1;\n"
      "has^inf A(x);\n"
      "has B(K);\n"
      "receive^inf B <- A items {x};\n"
      "compute^inf {B} y = F(x);\n"
      "compute^inf {B} z = F(y^2);\n"
      "trust V A;\n"
      "verify^inf V attest A {y = F(x)};\n"
      "verify^inf V attest B {y = F(x)};\n");
  return arch;
}

inline Equation claim_eq() {
  return Equation::equal(Term::var("y"),
                         Term::apply("F", Term::var("x")));
}

inline std::size_t slots(const GlobalState& s, const std::string& comp,
                         const std::string& var) {
  return s.components.at(comp).vars.at(var).size();
}

inline const Value& slot(const GlobalState& s, const std::string& comp,
                         const std::string& var, std::size_t i) {
  return s.components.at(comp).vars.at(var).at(i);
}

}  // namespace detail_cases

inline std::vector<SemanticsCheck> run_semantics_golden_suite() {
  using namespace detail_cases;
  const Architecture& arch = fixture();
  std::vector<SemanticsCheck> out;

  {  // 1: the initial state has one undefined slot per declared name
    Checker c("initial state: one undefined slot per name, session 1");
    GlobalState s = initial_state(arch);
    c.expect(s.session == 1, "session counter starts at 1");
    c.expect(s.components.size() == 3, "one state per component");
    for (const auto& [comp, st] : s.components) {
      c.expect(!st.error, comp + " starts outside Error");
      c.expect(st.vars.size() == 3, comp + " lists every declared variable");
      c.expect(st.consts.size() == 1, comp + " lists every declared constant");
      for (const auto& [var, vals] : st.vars) {
        c.expect(vals.size() == 1, comp + "." + var + " has one slot");
        c.expect(!vals.back().has_value(), comp + "." + var + " starts undefined");
      }
      c.expect(st.knowledge.empty(), comp + " starts with no knowledge");
    }
    out.push_back(c.result);
  }

  {  // 2: assignment replaces the current session's slot
    Checker c("assignment targets the current slot and overwrites it");
    GlobalState s = initial_state(arch);
    s = step_event(HasEvent{"A", "x", "v1"}, std::move(s), arch);
    c.expect(slot(s, "A", "x", 0) == Value{"v1"}, "first value lands in slot 0");
    s = step_event(HasEvent{"A", "x", "v2"}, std::move(s), arch);
    c.expect(slots(s, "A", "x") == 1, "re-assignment adds no slot");
    c.expect(slot(s, "A", "x", 0) == Value{"v2"}, "re-assignment overwrites");
    out.push_back(c.result);
  }

  {  // 3: Session appends a fresh undefined slot; history is preserved
    Checker c("session boundary appends an undefined slot per variable");
    GlobalState s = initial_state(arch);
    s = step_event(HasEvent{"A", "x", "v1"}, std::move(s), arch);
    s = step_event(SessionEvent{}, std::move(s), arch);
    c.expect(s.session == 2, "session counter advances");
    c.expect(slots(s, "A", "x") == 2, "variable list grows to the session count");
    c.expect(slot(s, "A", "x", 0) == Value{"v1"}, "previous session value kept");
    c.expect(!slot(s, "A", "x", 1).has_value(), "new slot undefined");
    out.push_back(c.result);
  }

  {  // 4: constants persist across session boundaries
    Checker c("constants repeat their value into the new session");
    GlobalState s = initial_state(arch);
    s = step_event(HasConstEvent{"B", "K"}, std::move(s), arch);
    s = step_event(SessionEvent{}, std::move(s), arch);
    const auto& ks = s.components.at("B").consts.at("K");
    c.expect(ks.size() == 2, "constant list grows with the session count");
    c.expect(ks[0] == Value{"K"} && ks[1] == Value{"K"},
             "defined constant value persists");
    out.push_back(c.result);
  }

  {  // 5: Session clears knowledge
    Checker c("session boundary clears per-session knowledge");
    GlobalState s = initial_state(arch);
    s = step_event(HasEvent{"A", "x", "t"}, std::move(s), arch);
    s = step_event(ReceiveEvent{"B", "A", {}, {{"x", "t"}}, {}}, std::move(s), arch);
    s = step_event(ComputeEvent{{"B"}, "y", Term::apply("F", Term::var("x"))},
                   std::move(s), arch);
    c.expect(s.components.at("B").knowledge.count(claim_eq()) == 1,
             "computation recorded as knowledge");
    s = step_event(SessionEvent{}, std::move(s), arch);
    c.expect(s.components.at("B").knowledge.empty(),
             "knowledge does not survive the boundary");
    out.push_back(c.result);
  }

  {  // 6: computation assigns a value and records its defining equation
    Checker c("computation assigns to the target and adds the equation");
    GlobalState s = initial_state(arch);
    s = step_event(HasEvent{"A", "x", "t"}, std::move(s), arch);
    s = step_event(ReceiveEvent{"B", "A", {}, {{"x", "t"}}, {}}, std::move(s), arch);
    s = step_event(ComputeEvent{{"B"}, "y", Term::apply("F", Term::var("x"))},
                   std::move(s), arch);
    c.expect(slot(s, "B", "y", 0) == Value{"F(t)"},
             "target holds the computed value");
    c.expect(s.components.at("B").knowledge.count(claim_eq()) == 1,
             "defining equation learned");
    c.expect(!s.components.at("B").error, "successful computation is not an error");
    out.push_back(c.result);
  }

  {  // 7: a computation whose inputs are missing marks the component Error
    Checker c("failed computation marks the computing component Error");
    GlobalState s = initial_state(arch);
    s = step_event(HasEvent{"A", "x", "t"}, std::move(s), arch);
    s = step_event(ReceiveEvent{"B", "A", {}, {{"x", "t"}}, {}}, std::move(s), arch);
    s = step_event(ComputeEvent{{"B"}, "y", Term::apply("F", Term::var("x"))},
                   std::move(s), arch);
    // z = F(y^2) needs two defined session values of y; only one exists
    s = step_event(ComputeEvent{{"B"}, "z",
                                Term::apply("F", Term(VariableRef{"y", {}, 2}))},
                   std::move(s), arch);
    c.expect(s.components.at("B").error, "missing history entry causes Error");
    c.expect(!slot(s, "B", "z", 0).has_value(), "failed computation assigns nothing");
    c.expect(!s.components.at("A").error, "other components are unaffected");
    out.push_back(c.result);
  }

  {  // 8: Error absorbs every event except Reset
    Checker c("Error state ignores assignment, sessions, and verification");
    GlobalState s = initial_state(arch);
    s = step_event(ComputeEvent{{"B"}, "y", Term::apply("F", Term::var("x"))},
                   std::move(s), arch);  // x undefined -> B errors
    c.expect(s.components.at("B").error, "precondition: B is in Error");
    GlobalState before = s;
    s = step_event(HasConstEvent{"B", "K"}, std::move(s), arch);
    c.expect(!s.components.at("B").consts.at("K").back().has_value(),
             "assignment ignored in Error");
    s = step_event(SessionEvent{}, std::move(s), arch);
    c.expect(s.components.at("B").error, "session keeps the Error state");
    c.expect(s.components.at("B").vars.at("y").size() ==
                 before.components.at("B").vars.at("y").size(),
             "session does not grow an errored component's lists");
    c.expect(slots(s, "A", "x") == 2, "healthy components still advance");
    out.push_back(c.result);
  }

  {  // 9: Reset restores the initial state, even from Error
    Checker c("reset re-initializes every component and the session counter");
    GlobalState s = initial_state(arch);
    s = step_event(HasEvent{"A", "x", "t"}, std::move(s), arch);
    s = step_event(ComputeEvent{{"B"}, "y", Term::apply("F", Term::var("x"))},
                   std::move(s), arch);  // B errors (x not at B)
    s = step_event(SessionEvent{}, std::move(s), arch);
    s = step_event(ResetEvent{}, std::move(s), arch);
    c.expect(s.session == 1, "session counter back to 1");
    c.expect(!s.components.at("B").error, "Error cleared");
    c.expect(slots(s, "A", "x") == 1 && !slot(s, "A", "x", 0).has_value(),
             "values cleared to one undefined slot");
    c.expect(describe_state(s) == describe_state(initial_state(arch)),
             "state equals the initial state");
    out.push_back(c.result);
  }

  {  // 10: receive binds transported items at the destination
    Checker c("receive assigns transported variables and constants");
    GlobalState s = initial_state(arch);
    s = step_event(HasEvent{"A", "x", "tok7"}, std::move(s), arch);
    s = step_event(ReceiveEvent{"B", "A", {}, {{"x", "tok7"}}, {"K"}},
                   std::move(s), arch);
    c.expect(slot(s, "B", "x", 0) == Value{"tok7"}, "variable value copied");
    c.expect(s.components.at("B").consts.at("K").back() == Value{"K"},
             "constant item defined at the destination");
    c.expect(slot(s, "A", "x", 0) == Value{"tok7"}, "source keeps its value");
    out.push_back(c.result);
  }

  {  // 11: verification filters statements through trust
    Checker c("verify adds attested claims only from trusted issuers");
    GlobalState s = initial_state(arch);
    Statement trusted = Attestation{"A", {claim_eq()}};
    Statement untrusted = Attestation{"B", {claim_eq()}};
    s = step_event(VerifyEvent{"V", untrusted}, std::move(s), arch);
    c.expect(s.components.at("V").knowledge.empty(),
             "claim from an untrusted issuer ignored");
    s = step_event(VerifyEvent{"V", trusted}, std::move(s), arch);
    c.expect(s.components.at("V").knowledge.count(claim_eq()) == 1,
             "claim from a trusted issuer learned");
    out.push_back(c.result);
  }

  {  // 12: list lengths track the session counter at every prefix
    Checker c("variable list length equals the session counter throughout");
    GlobalState s = initial_state(arch);
    Trace t = {Event{HasEvent{"A", "x", "a1"}}, Event{SessionEvent{}},
               Event{HasEvent{"A", "x", "a2"}}, Event{SessionEvent{}},
               Event{SessionEvent{}}, Event{ResetEvent{}},
               Event{HasEvent{"A", "x", "b1"}}};
    for (const Event& e : t) {
      s = step_event(e, std::move(s), arch);
      for (const auto& [comp, st] : s.components) {
        if (st.error) continue;
        for (const auto& [var, vals] : st.vars)
          c.expect(vals.size() == s.session,
                   comp + "." + var + " tracks the session counter");
        for (const auto& [konst, vals] : st.consts)
          c.expect(vals.size() == s.session,
                   comp + "." + konst + " tracks the session counter");
      }
    }
    c.expect(s.session == 1, "reset returned the counter to 1");
    c.expect(slot(s, "A", "x", 0) == Value{"b1"}, "post-reset assignment lands");
    out.push_back(c.result);
  }

  return out;
}

}  // namespace archproof::testing
