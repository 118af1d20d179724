#include "archproof/corpus.hpp"

#include <stdexcept>

namespace archproof {
namespace {

Term V(const std::string& name) { return Term::var(name); }
Term K(const std::string& name) { return Term::constant(name); }

Equation E(Term l, Term r) { return Equation::equal(std::move(l), std::move(r)); }

Statement att(const ComponentId& issuer, std::initializer_list<Equation> claims) {
  return Attestation{issuer, std::vector<Equation>(claims)};
}

DepPremise need_var(const std::string& v, std::uint64_t n = 1) {
  return DepPremise{v, false, Multiplicity::finite(n)};
}

DepPremise need_const(const std::string& c) {
  return DepPremise{c, true, Multiplicity::finite(1)};
}

const Multiplicity kInf = Multiplicity::infinite();

// Encrypted database, decryption and matching at the terminal.
Architecture make_ed() {
  Architecture a;
  a.components = {"I", "U", "T", "S"};
  a.variables = {{"br", 1}, {"rd", 1}, {"thr", 1}, {"ebr", 1},
                 {"brp", 1}, {"bs", 1}, {"dec", 1}};
  a.functions = {{"Enc", 1}, {"Dec", 1}, {"Extract", 1}, {"Mu", 3}};

  Equation e_enc = E(V("ebr"), Term::apply("Enc", V("br")));
  a.primitives = {
      HasVarPrim{"I", "br", kInf},
      HasVarPrim{"U", "rd", kInf},
      HasVarPrim{"T", "thr", kInf},
      ComputePrim{{"I"}, "ebr", Term::apply("Enc", V("br")), kInf},
      ReceivePrim{"S", "I", {att("I", {e_enc})}, {VarItem{"ebr"}}, kInf},
      ReceivePrim{"T", "S", {att("I", {e_enc})}, {VarItem{"ebr"}}, kInf},
      TrustPrim{"T", "I"},
      VerifyPrim{"T", att("I", {e_enc}), kInf},
      ReceivePrim{"T", "U", {}, {VarItem{"rd"}}, kInf},
      ComputePrim{{"T"}, "bs", Term::apply("Extract", V("rd")), kInf},
      ComputePrim{{"T"}, "brp", Term::apply("Dec", V("ebr")), kInf},
      ComputePrim{{"T"}, "dec", Term::apply("Mu", V("brp"), V("bs"), V("thr")), kInf},
      ReceivePrim{"U", "T", {}, {VarItem{"dec"}}, kInf},
  };
  a.deps = {
      {"I", "ebr", false, {need_var("br")}},
      {"T", "bs", false, {need_var("rd")}},
      {"T", "dec", false, {need_var("brp"), need_var("bs"), need_var("thr")}},
      {"T", "brp", false, {need_var("ebr")}},
      {"T", "br", false, {need_var("ebr")}},
  };
  a.rules = {{std::nullopt, {e_enc}, E(V("br"), Term::apply("Dec", V("ebr")))}};
  a.functionality = {
      e_enc,
      E(V("brp"), Term::apply("Dec", V("ebr"))),
      E(V("bs"), Term::apply("Extract", V("rd"))),
      E(V("dec"), Term::apply("Mu", V("brp"), V("bs"), V("thr"))),
  };
  return a;
}

// Encrypted database, decryption and matching inside a security module.
Architecture make_hsm() {
  Architecture a;
  a.components = {"I", "U", "T", "S", "M"};
  a.variables = {{"br", 1}, {"rd", 1}, {"thr", 1}, {"ebr", 1},
                 {"brp", 1}, {"bs", 1}, {"dec", 1}};
  a.functions = {{"Enc", 1}, {"Dec", 1}, {"Extract", 1}, {"Mu", 3}};

  Equation e_enc = E(V("ebr"), Term::apply("Enc", V("br")));
  Equation e_dec = E(V("brp"), Term::apply("Dec", V("ebr")));
  Equation e_mu = E(V("dec"), Term::apply("Mu", V("brp"), V("bs"), V("thr")));
  a.primitives = {
      HasVarPrim{"I", "br", kInf},
      HasVarPrim{"U", "rd", kInf},
      HasVarPrim{"M", "thr", kInf},
      ComputePrim{{"I"}, "ebr", Term::apply("Enc", V("br")), kInf},
      ReceivePrim{"S", "I", {att("I", {e_enc})}, {VarItem{"ebr"}}, kInf},
      ReceivePrim{"T", "S", {att("I", {e_enc})}, {VarItem{"ebr"}}, kInf},
      TrustPrim{"T", "I"},
      VerifyPrim{"T", att("I", {e_enc}), kInf},
      ReceivePrim{"T", "U", {}, {VarItem{"rd"}}, kInf},
      ComputePrim{{"T"}, "bs", Term::apply("Extract", V("rd")), kInf},
      ReceivePrim{"M", "T", {}, {VarItem{"bs"}, VarItem{"ebr"}}, kInf},
      ComputePrim{{"M"}, "brp", Term::apply("Dec", V("ebr")), kInf},
      ComputePrim{{"M"}, "dec", Term::apply("Mu", V("brp"), V("bs"), V("thr")), kInf},
      VerifyPrim{"T", att("M", {e_mu}), kInf},
      TrustPrim{"T", "M"},
      ReceivePrim{"T", "M", {att("M", {e_mu}), att("M", {e_dec})}, {VarItem{"dec"}}, kInf},
      VerifyPrim{"T", att("M", {e_dec}), kInf},
  };
  a.deps = {
      {"I", "ebr", false, {need_var("br")}},
      {"T", "bs", false, {need_var("rd")}},
      {"M", "brp", false, {need_var("ebr")}},
      {"M", "br", false, {need_var("ebr")}},
      {"M", "dec", false, {need_var("brp"), need_var("bs"), need_var("thr")}},
  };
  a.rules = {{std::nullopt, {e_enc}, E(V("br"), Term::apply("Dec", V("ebr")))}};
  a.functionality = {
      e_enc, e_dec,
      E(V("bs"), Term::apply("Extract", V("rd"))),
      e_mu,
  };
  return a;
}

// Matching over homomorphically encrypted data at the server.
Architecture make_hom() {
  Architecture a;
  a.components = {"I", "U", "T", "S", "M"};
  a.variables = {{"br", 1}, {"rd", 1}, {"thr", 1}, {"ebr", 1},
                 {"ebs", 1}, {"bs", 1}, {"edec", 1}, {"dec", 1}};
  a.functions = {{"Enc", 1}, {"Dec", 1}, {"Extract", 1}, {"HomMu", 3}, {"Mu", 3}};

  Equation e_encr = E(V("ebr"), Term::apply("Enc", V("br")));
  Equation e_encs = E(V("ebs"), Term::apply("Enc", V("bs")));
  Equation e_hom = E(V("edec"), Term::apply("HomMu", V("ebr"), V("ebs"), V("thr")));
  Equation e_dd = E(V("dec"), Term::apply("Dec", V("edec")));
  a.primitives = {
      HasVarPrim{"I", "br", kInf},
      HasVarPrim{"U", "rd", kInf},
      HasVarPrim{"S", "thr", kInf},
      ComputePrim{{"I"}, "ebr", Term::apply("Enc", V("br")), kInf},
      ReceivePrim{"S", "I", {att("I", {e_encr})}, {VarItem{"ebr"}}, kInf},
      ReceivePrim{"T", "U", {}, {VarItem{"rd"}}, kInf},
      ComputePrim{{"T"}, "bs", Term::apply("Extract", V("rd")), kInf},
      ComputePrim{{"T"}, "ebs", Term::apply("Enc", V("bs")), kInf},
      ReceivePrim{"S", "T", {}, {VarItem{"ebs"}}, kInf},
      ComputePrim{{"S"}, "edec", Term::apply("HomMu", V("ebr"), V("ebs"), V("thr")), kInf},
      ReceivePrim{"T", "S", {att("I", {e_encr}), att("S", {e_hom})}, {VarItem{"edec"}}, kInf},
      VerifyPrim{"T", att("I", {e_encr}), kInf},
      VerifyPrim{"T", att("S", {e_hom}), kInf},
      TrustPrim{"T", "S"},
      TrustPrim{"T", "I"},
      ReceivePrim{"M", "T", {}, {VarItem{"edec"}}, kInf},
      ComputePrim{{"M"}, "dec", Term::apply("Dec", V("edec")), kInf},
      ReceivePrim{"T", "M", {att("M", {e_dd})}, {VarItem{"dec"}}, kInf},
      TrustPrim{"T", "M"},
      VerifyPrim{"T", att("M", {e_dd}), kInf},
      ReceivePrim{"U", "T", {}, {VarItem{"dec"}}, kInf},
  };
  a.deps = {
      {"T", "bs", false, {need_var("rd")}},
      {"T", "ebs", false, {need_var("bs")}},
      {"I", "ebr", false, {need_var("br")}},
      {"M", "br", false, {need_var("ebr")}},
      {"M", "bs", false, {need_var("ebs")}},
      {"M", "dec", false, {need_var("edec")}},
  };
  a.rules = {{std::nullopt,
              {e_encr, e_encs, e_hom},
              E(Term::apply("Dec", V("edec")),
                Term::apply("Mu", V("br"), V("bs"), V("thr")))}};
  a.functionality = {
      e_encr,
      E(V("bs"), Term::apply("Extract", V("rd"))),
      e_encs, e_hom, e_dd,
  };
  return a;
}

// Match-on-card: storage and matching inside the user's smart card.
Architecture make_moc() {
  Architecture a;
  a.components = {"U", "T", "C"};
  a.variables = {{"br", 1}, {"rd", 1}, {"thr", 1}, {"bs", 1}, {"dec", 1}};
  a.functions = {{"Extract", 1}, {"Mu", 3}};

  Equation e_mu = E(V("dec"), Term::apply("Mu", V("br"), V("bs"), V("thr")));
  a.primitives = {
      HasVarPrim{"C", "br", kInf},
      HasVarPrim{"U", "rd", kInf},
      HasVarPrim{"C", "thr", kInf},
      ReceivePrim{"T", "U", {}, {VarItem{"rd"}}, kInf},
      ComputePrim{{"T"}, "bs", Term::apply("Extract", V("rd")), kInf},
      ReceivePrim{"C", "T", {}, {VarItem{"bs"}}, kInf},
      ComputePrim{{"C"}, "dec", Term::apply("Mu", V("br"), V("bs"), V("thr")), kInf},
      ReceivePrim{"U", "T", {}, {VarItem{"dec"}}, kInf},
      ReceivePrim{"T", "C", {att("C", {e_mu})}, {VarItem{"dec"}}, kInf},
      VerifyPrim{"T", att("C", {e_mu}), kInf},
      TrustPrim{"T", "C"},
  };
  a.functionality = {E(V("bs"), Term::apply("Extract", V("rd"))), e_mu};
  return a;
}

// The identification family.  `bound` is the multiplicity attached to the
// bounded primitives (infinite for the base architecture); `extended` adds
// the accumulation dependences, `revert_dep_t` removes the terminal's
// accumulation entry again (variant 1), `with_reset` adds the reset primitive
// (variant 3).
Architecture make_mi(const CorpusParams& p, Multiplicity bound, bool extended,
                     bool revert_dep_t, bool with_reset) {
  Architecture a;
  a.components = {"I", "U", "T", "S", "M"};
  a.variables = {{"br", p.N}, {"rd", 1},  {"bs", 1},   {"qs", 1},   {"dec", 1},
                 {"ebr", p.N}, {"qr", p.N}, {"ind", p.C}, {"sebr", p.C}, {"sbr", p.C}};
  a.constants = {"C", "THR"};
  a.functions = {{"Enc", 1},  {"Dec", 1},  {"Extract", 1}, {"Quant", 1},
                 {"QComp", 3}, {"EGet", 2}, {"Mu", 3}};

  Equation e_enc = E(V("ebr"), Term::apply("Enc", V("br")));
  Equation e_q = E(V("qr"), Term::apply("Quant", V("br")));
  Equation e_mu = E(V("dec"), Term::apply("Mu", V("sbr"), V("bs"), K("THR")));
  Equation e_sd = E(V("sbr"), Term::apply("Dec", V("ebr")));
  const Multiplicity b = bound;
  a.primitives = {
      HasVarPrim{"I", "br", kInf},
      HasVarPrim{"U", "rd", b},
      HasConstPrim{"M", "C"},
      HasConstPrim{"M", "THR"},
      ComputePrim{{"I"}, "ebr", Term::apply("Enc", V("br")), b},
      ComputePrim{{"I"}, "qr", Term::apply("Quant", V("br")), b},
      ComputePrim{{"T"}, "bs", Term::apply("Extract", V("rd")), b},
      ComputePrim{{"T"}, "sebr", Term::apply("EGet", V("ebr"), V("ind")), b},
      ComputePrim{{"T"}, "qs", Term::apply("Quant", V("bs")), b},
      ComputePrim{{"M"}, "ind", Term::apply("QComp", V("qs"), V("qr"), K("C")), b},
      ComputePrim{{"M"}, "sbr", Term::apply("Dec", V("sebr")), b},
      ComputePrim{{"M"}, "dec", Term::apply("Mu", V("sbr"), V("bs"), K("THR")), b},
      ReceivePrim{"S", "I", {att("I", {e_enc})}, {VarItem{"ebr"}}, b},
      ReceivePrim{"T", "U", {}, {VarItem{"rd"}}, b},
      ReceivePrim{"T", "S", {att("I", {e_enc})}, {VarItem{"ebr"}}, b},
      ReceivePrim{"M", "T", {}, {VarItem{"qs"}}, b},
      ReceivePrim{"M", "I", {att("I", {e_q})}, {VarItem{"qr"}}, b},
      ReceivePrim{"T", "M", {}, {VarItem{"ind"}}, b},
      ReceivePrim{"M", "T", {}, {VarItem{"sebr"}, VarItem{"bs"}}, b},
      ReceivePrim{"T", "M", {}, {VarItem{"dec"}}, b},
      TrustPrim{"T", "I"},
      TrustPrim{"M", "I"},
      TrustPrim{"T", "M"},
      VerifyPrim{"T", att("I", {e_enc}), b},
      VerifyPrim{"T", att("M", {e_mu}), b},
      VerifyPrim{"M", att("I", {e_q}), b},
      VerifyPrim{"T", att("M", {e_sd}), b},
  };
  a.deps = {
      {"I", "ebr", false, {need_var("br")}},
      {"I", "qr", false, {need_var("br")}},
      {"T", "bs", false, {need_var("rd")}},
      {"T", "qs", false, {need_var("bs")}},
      {"T", "sebr", false, {need_var("bs"), need_var("ind")}},
      {"M", "ind", false, {need_var("qs"), need_var("qr"), need_const("C")}},
      {"M", "sbr", false, {need_var("sebr")}},
      {"M", "dec", false, {need_var("sbr"), need_var("bs"), need_const("THR")}},
      {"M", "br", false, {need_var("ebr")}},
  };
  if (extended) {
    if (!revert_dep_t) {
      std::uint64_t nq = p.N * p.Q;
      a.deps.push_back(
          {"T", "qr", false, {need_var("ind", nq), need_var("qs", nq)}});
    }
    std::uint64_t ceil_nc = (p.N + p.C - 1) / p.C;
    a.deps.push_back({"M", "ebr", false, {need_var("sebr", ceil_nc)}});
  }
  if (with_reset) a.primitives.push_back(ResetPrim{});
  a.functionality = {
      e_enc, e_q,
      E(V("bs"), Term::apply("Extract", V("rd"))),
      E(V("qs"), Term::apply("Quant", V("bs"))),
      E(V("sebr"), Term::apply("EGet", V("ebr"), V("ind"))),
      E(V("ind"), Term::apply("QComp", V("qs"), V("qr"), K("C"))),
      E(V("sbr"), Term::apply("Dec", V("sebr"))),
      e_mu,
  };
  return a;
}

}  // namespace

std::vector<std::string> corpus_names() {
  return {"ed", "hsm", "hom", "moc", "mi", "mi-e", "mi-e1", "mi-e2", "mi-e3"};
}

Architecture instantiate_corpus(const std::string& name, const CorpusParams& p) {
  if (name == "ed") return make_ed();
  if (name == "hsm") return make_hsm();
  if (name == "hom") return make_hom();
  if (name == "moc") return make_moc();
  if (name == "mi")
    return make_mi(p, Multiplicity::infinite(), false, false, false);
  if (name == "mi-e")
    return make_mi(p, Multiplicity::finite(p.n), true, false, false);
  if (name == "mi-e1")
    return make_mi(p, Multiplicity::finite(p.n), true, true, false);
  if (name == "mi-e2")
    return make_mi(p, Multiplicity::finite(p.B), true, false, false);
  if (name == "mi-e3")
    return make_mi(p, Multiplicity::finite(p.B), true, false, true);
  throw std::out_of_range("unknown corpus architecture: " + name);
}

}  // namespace archproof
