#include <cctype>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "archproof/dsl.hpp"

namespace archproof {

ParseError::ParseError(SourceSpan span, std::vector<std::string> expected,
                       std::string found)
    : std::runtime_error(format(span, expected, found)),
      span_(span),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

std::string ParseError::format(const SourceSpan& span,
                               const std::vector<std::string>& expected,
                               const std::string& found) {
  std::string msg = "parse error at line " + std::to_string(span.line) +
                    ", column " + std::to_string(span.column) + ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) msg += (i + 1 == expected.size()) ? " or " : ", ";
    msg += expected[i];
  }
  msg += "; found " + (found.empty() ? std::string("end of input") : "'" + found + "'");
  return msg;
}

namespace {

enum class Tok {
  ident, integer,
  lparen, rparen, lbrace, rbrace, lbracket, rbracket,
  semi, comma, caret, slash, colon, equals, question, amp,
  arrow,      // <-
  turnstile,  // |>
  eof,
};

struct Token {
  Tok kind = Tok::eof;
  std::string text;
  SourceSpan span;
};

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "component", "var", "range", "const", "fun", "has", "receive", "items",
      "compute", "verify", "trust", "reset", "dep", "rule", "functionality",
      "attest", "proof", "inf", "in", "knows", "hasnone"};
  return words;
}

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_trivia();
    Token t;
    t.span.start = pos_;
    t.span.line = line_;
    t.span.column = col_;
    if (pos_ >= text_.size()) {
      t.kind = Tok::eof;
      t.span.end = pos_;
      return t;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        bump();
      t.kind = Tok::ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        bump();
      t.kind = Tok::integer;
    } else if (c == '<' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
      bump();
      bump();
      t.kind = Tok::arrow;
    } else if (c == '|' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      bump();
      bump();
      t.kind = Tok::turnstile;
    } else {
      switch (c) {
        case '(': t.kind = Tok::lparen; break;
        case ')': t.kind = Tok::rparen; break;
        case '{': t.kind = Tok::lbrace; break;
        case '}': t.kind = Tok::rbrace; break;
        case '[': t.kind = Tok::lbracket; break;
        case ']': t.kind = Tok::rbracket; break;
        case ';': t.kind = Tok::semi; break;
        case ',': t.kind = Tok::comma; break;
        case '^': t.kind = Tok::caret; break;
        case '/': t.kind = Tok::slash; break;
        case ':': t.kind = Tok::colon; break;
        case '=': t.kind = Tok::equals; break;
        case '?': t.kind = Tok::question; break;
        case '&': t.kind = Tok::amp; break;
        default: {
          t.span.end = pos_ + 1;
          throw ParseError(t.span, {"a valid token"}, std::string(1, c));
        }
      }
      bump();
    }
    t.span.end = pos_;
    t.text = text_.substr(t.span.start, t.span.end - t.span.start);
    return t;
  }

private:
  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// How terms are interpreted at the current position: rules admit
// metavariables; queries carry no declarations, so every bare name parses as
// a variable reference and is reclassified later by resolve_property.
struct TermCtx {
  bool allow_meta = false;
  bool resolve_names = true;
};

class Parser {
public:
  explicit Parser(const std::string& text) : lexer_(text) { cur_ = lexer_.next(); }

  Architecture parse_file() {
    while (cur_.kind != Tok::eof) parse_declaration();
    return std::move(arch_);
  }

  Equation parse_equation_entry() {
    Equation eq = parse_equation(TermCtx{false, false});
    if (cur_.kind != Tok::eof) fail({"end of input"});
    return eq;
  }

  Statement parse_statement_entry() {
    standalone_ = true;
    Statement st = parse_statement(TermCtx{false, false});
    if (cur_.kind != Tok::eof) fail({"end of input"});
    return st;
  }

  Term parse_term_entry() {
    Term t = parse_term(TermCtx{false, false});
    if (cur_.kind != Tok::eof) fail({"end of input"});
    return t;
  }

  Property parse_query_text() {
    std::vector<Property> parts;
    parts.push_back(parse_one_property());
    while (cur_.kind == Tok::amp) {
      advance();
      parts.push_back(parse_one_property());
    }
    if (cur_.kind != Tok::eof) fail({"'&'", "end of input"});
    if (parts.size() == 1) return parts.front();
    Property conj;
    conj.node = PropConj{std::move(parts)};
    return conj;
  }

private:
  void advance() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    throw ParseError(cur_.span, std::move(expected), cur_.text);
  }

  bool at_kw(const char* kw) const {
    return cur_.kind == Tok::ident && cur_.text == kw;
  }

  void expect_kw(const char* kw) {
    if (!at_kw(kw)) fail({std::string("'") + kw + "'"});
    advance();
  }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail({what});
    advance();
  }

  std::string expect_name(const char* what) {
    if (cur_.kind != Tok::ident) fail({what});
    if (reserved_words().count(cur_.text))
      fail({std::string(what) + " (\"" + cur_.text + "\" is a keyword)"});
    std::string name = cur_.text;
    advance();
    return name;
  }

  std::uint64_t expect_positive_int(const char* what) {
    if (cur_.kind != Tok::integer) fail({what});
    std::uint64_t value = 0;
    try {
      value = std::stoull(cur_.text);
    } catch (const std::out_of_range&) {
      fail({what});
    }
    if (value == 0) fail({what});
    advance();
    return value;
  }

  // --- symbol lookups against the architecture built so far ---------------

  std::string expect_component(const char* role) {
    Token tok = cur_;
    std::string name = expect_name("component name");
    // Standalone fragments (queries, trace statements) carry no declarations;
    // their names are validated during resolution instead.
    if (!standalone_ && !arch_.has_component(name))
      throw ParseError(tok.span, {std::string("a declared component (") + role + ")"},
                       tok.text);
    return name;
  }

  void check_fresh(const Token& tok, const std::string& name) {
    if (arch_.has_component(name) || arch_.find_variable(name) ||
        arch_.has_constant(name) || arch_.find_function(name))
      throw ParseError(tok.span, {"an undeclared name"}, name);
  }

  // --- declarations --------------------------------------------------------

  void parse_declaration() {
    if (at_kw("component")) return parse_component();
    if (at_kw("var")) return parse_var();
    if (at_kw("const")) return parse_const();
    if (at_kw("fun")) return parse_fun();
    if (at_kw("has")) return parse_has();
    if (at_kw("receive")) return parse_receive();
    if (at_kw("compute")) return parse_compute();
    if (at_kw("verify")) return parse_verify();
    if (at_kw("trust")) return parse_trust();
    if (at_kw("reset")) return parse_reset();
    if (at_kw("dep")) return parse_dep();
    if (at_kw("rule")) return parse_rule();
    if (at_kw("functionality")) return parse_functionality();
    fail({"a declaration", "a primitive", "'dep'", "'rule'", "'functionality'"});
  }

  void parse_component() {
    advance();
    Token tok = cur_;
    std::string name = expect_name("component name");
    check_fresh(tok, name);
    arch_.components.push_back(name);
    expect(Tok::semi, "';'");
  }

  void parse_var() {
    advance();
    Token tok = cur_;
    std::string name = expect_name("variable name");
    check_fresh(tok, name);
    std::uint64_t range = 1;
    if (at_kw("range")) {
      advance();
      range = expect_positive_int("positive range");
    }
    arch_.variables.push_back(VariableDecl{name, range});
    expect(Tok::semi, "';'");
  }

  void parse_const() {
    advance();
    Token tok = cur_;
    std::string name = expect_name("constant name");
    check_fresh(tok, name);
    arch_.constants.push_back(name);
    expect(Tok::semi, "';'");
  }

  void parse_fun() {
    advance();
    Token tok = cur_;
    std::string name = expect_name("function name");
    check_fresh(tok, name);
    expect(Tok::slash, "'/'");
    if (cur_.kind != Tok::integer) fail({"arity"});
    unsigned arity = 0;
    try {
      arity = static_cast<unsigned>(std::stoul(cur_.text));
    } catch (const std::out_of_range&) {
      fail({"arity"});
    }
    advance();
    arch_.functions.push_back(FunctionDecl{name, arity});
    expect(Tok::semi, "';'");
  }

  // --- multiplicities ------------------------------------------------------

  Multiplicity parse_mult_suffix() {
    if (cur_.kind != Tok::caret) return Multiplicity::infinite();
    advance();
    if (at_kw("inf")) {
      advance();
      return Multiplicity::infinite();
    }
    return Multiplicity::finite(expect_positive_int("positive multiplicity or 'inf'"));
  }

  // --- primitives ----------------------------------------------------------

  void parse_has() {
    advance();
    Multiplicity mult = parse_mult_suffix();
    std::string comp = expect_component("subject of has");
    expect(Tok::lparen, "'('");
    Token tok = cur_;
    std::string name = expect_name("variable or constant name");
    expect(Tok::rparen, "')'");
    expect(Tok::semi, "';'");
    if (arch_.find_variable(name)) {
      arch_.primitives.push_back(HasVarPrim{comp, name, mult});
    } else if (arch_.has_constant(name)) {
      if (!mult.is_infinite())
        throw ParseError(tok.span, {"a variable (constants take no multiplicity)"},
                         name);
      arch_.primitives.push_back(HasConstPrim{comp, name});
    } else {
      throw ParseError(tok.span, {"a declared variable or constant"}, tok.text);
    }
  }

  Attestation parse_attestation(const TermCtx& ctx) {
    expect_kw("attest");
    std::string issuer = expect_component("attestation issuer");
    expect(Tok::lbrace, "'{'");
    Attestation att{issuer, {}};
    if (cur_.kind != Tok::rbrace) {
      att.claims.push_back(parse_equation(ctx));
      while (cur_.kind == Tok::semi) {
        advance();
        att.claims.push_back(parse_equation(ctx));
      }
    }
    expect(Tok::rbrace, "'}'");
    return att;
  }

  Statement parse_statement(const TermCtx& ctx) {
    if (at_kw("attest")) return parse_attestation(ctx);
    if (!at_kw("proof")) fail({"'attest'", "'proof'"});
    advance();
    std::string issuer = expect_component("proof issuer");
    expect(Tok::lbrace, "'{'");
    ProofStatement pr{issuer, {}};
    if (cur_.kind == Tok::rbrace) fail({"a proof payload (equation or 'attest')"});
    pr.payload.push_back(parse_payload_item(ctx));
    while (cur_.kind == Tok::semi) {
      advance();
      pr.payload.push_back(parse_payload_item(ctx));
    }
    expect(Tok::rbrace, "'}'");
    return pr;
  }

  ProofPayloadItem parse_payload_item(const TermCtx& ctx) {
    if (at_kw("attest")) return parse_attestation(ctx);
    return parse_equation(ctx);
  }

  void parse_receive() {
    advance();
    Multiplicity mult = parse_mult_suffix();
    std::string dst = expect_component("receiver");
    expect(Tok::arrow, "'<-'");
    std::string src = expect_component("sender");
    ReceivePrim prim{dst, src, {}, {}, mult};
    while (at_kw("attest") || at_kw("proof"))
      prim.statements.push_back(parse_statement(TermCtx{}));
    if (at_kw("items")) {
      advance();
      expect(Tok::lbrace, "'{'");
      if (cur_.kind != Tok::rbrace) {
        prim.items.push_back(parse_item());
        while (cur_.kind == Tok::comma) {
          advance();
          prim.items.push_back(parse_item());
        }
      }
      expect(Tok::rbrace, "'}'");
    }
    expect(Tok::semi, "';'");
    arch_.primitives.push_back(std::move(prim));
  }

  Item parse_item() {
    Token tok = cur_;
    std::string name = expect_name("variable or constant name");
    if (arch_.find_variable(name)) return VarItem{name};
    if (arch_.has_constant(name)) return ConstItem{name};
    throw ParseError(tok.span, {"a declared variable or constant"}, tok.text);
  }

  void parse_compute() {
    advance();
    Multiplicity mult = parse_mult_suffix();
    expect(Tok::lbrace, "'{'");
    std::vector<ComponentId> group;
    group.push_back(expect_component("compute group member"));
    while (cur_.kind == Tok::comma) {
      advance();
      group.push_back(expect_component("compute group member"));
    }
    expect(Tok::rbrace, "'}'");
    Token tok = cur_;
    std::string target = expect_name("target variable");
    if (!arch_.find_variable(target))
      throw ParseError(tok.span, {"a declared variable"}, tok.text);
    expect(Tok::equals, "'='");
    Term rhs = parse_term(TermCtx{});
    expect(Tok::semi, "';'");
    arch_.primitives.push_back(ComputePrim{std::move(group), target, std::move(rhs), mult});
  }

  void parse_verify() {
    advance();
    Multiplicity mult = parse_mult_suffix();
    std::string comp = expect_component("verifier");
    Statement st = parse_statement(TermCtx{});
    expect(Tok::semi, "';'");
    arch_.primitives.push_back(VerifyPrim{comp, std::move(st), mult});
  }

  void parse_trust() {
    advance();
    std::string truster = expect_component("truster");
    std::string trustee = expect_component("trustee");
    expect(Tok::semi, "';'");
    arch_.primitives.push_back(TrustPrim{truster, trustee});
  }

  void parse_reset() {
    advance();
    expect(Tok::semi, "';'");
    arch_.primitives.push_back(ResetPrim{});
  }

  // --- dependence and deductive relations ----------------------------------

  void parse_dep() {
    advance();
    std::string owner = expect_component("dep owner");
    expect(Tok::colon, "':'");
    Token tok = cur_;
    std::string target = expect_name("dep target");
    bool target_is_const;
    if (arch_.find_variable(target)) {
      target_is_const = false;
    } else if (arch_.has_constant(target)) {
      target_is_const = true;
    } else {
      throw ParseError(tok.span, {"a declared variable or constant"}, tok.text);
    }
    expect(Tok::arrow, "'<-'");
    expect(Tok::lbrace, "'{'");
    DepEntry entry{owner, target, target_is_const, {}};
    if (cur_.kind != Tok::rbrace) {
      entry.premises.push_back(parse_dep_premise());
      while (cur_.kind == Tok::comma) {
        advance();
        entry.premises.push_back(parse_dep_premise());
      }
    }
    expect(Tok::rbrace, "'}'");
    expect(Tok::semi, "';'");
    arch_.deps.push_back(std::move(entry));
  }

  DepPremise parse_dep_premise() {
    Token tok = cur_;
    std::string name = expect_name("variable or constant name");
    bool is_const;
    if (arch_.find_variable(name)) {
      is_const = false;
    } else if (arch_.has_constant(name)) {
      is_const = true;
    } else {
      throw ParseError(tok.span, {"a declared variable or constant"}, tok.text);
    }
    Multiplicity need = Multiplicity::finite(1);
    if (cur_.kind == Tok::caret) {
      if (is_const)
        throw ParseError(cur_.span, {"',' or '}' (constants take no required count)"},
                         cur_.text);
      advance();
      need = Multiplicity::finite(expect_positive_int("positive required count"));
    }
    return DepPremise{name, is_const, need};
  }

  void parse_rule() {
    advance();
    std::optional<ComponentId> owner;
    if (cur_.kind == Tok::ident) owner = expect_component("rule owner");
    expect(Tok::colon, "':'");
    expect(Tok::lbrace, "'{'");
    TermCtx ctx{true, true};
    DeductiveRule rule{owner, {}, Equation{}};
    if (cur_.kind != Tok::rbrace) {
      rule.premises.push_back(parse_equation(ctx));
      while (cur_.kind == Tok::semi) {
        advance();
        rule.premises.push_back(parse_equation(ctx));
      }
    }
    expect(Tok::rbrace, "'}'");
    expect(Tok::turnstile, "'|>'");
    rule.conclusion = parse_equation(ctx);
    expect(Tok::semi, "';'");
    arch_.rules.push_back(std::move(rule));
  }

  void parse_functionality() {
    advance();
    expect(Tok::lbrace, "'{'");
    if (cur_.kind != Tok::rbrace) {
      arch_.functionality.push_back(parse_equation(TermCtx{}));
      while (cur_.kind == Tok::semi) {
        advance();
        arch_.functionality.push_back(parse_equation(TermCtx{}));
      }
    }
    expect(Tok::rbrace, "'}'");
    expect(Tok::semi, "';'");
  }

  // --- terms and equations --------------------------------------------------

  Equation parse_equation(const TermCtx& ctx) {
    Term lhs = parse_term(ctx);
    Pred pred;
    if (cur_.kind == Tok::equals) {
      pred = Pred::eq;
    } else if (at_kw("in")) {
      pred = Pred::membership;
    } else {
      fail({"'='", "'in'"});
    }
    advance();
    Term rhs = parse_term(ctx);
    return Equation{pred, {std::move(lhs), std::move(rhs)}};
  }

  Term parse_term(const TermCtx& ctx) {
    if (cur_.kind == Tok::question) {
      if (!ctx.allow_meta) fail({"a term (metavariables are only allowed in rules)"});
      advance();
      return Term::meta(expect_name("metavariable name"));
    }
    Token tok = cur_;
    std::string name = expect_name("a term");
    if (cur_.kind == Tok::lparen) {
      if (ctx.resolve_names && !arch_.find_function(name))
        throw ParseError(tok.span, {"a declared function"}, tok.text);
      advance();
      Apply app{name, {}};
      if (cur_.kind != Tok::rparen) {
        app.args.push_back(parse_term(ctx));
        while (cur_.kind == Tok::comma) {
          advance();
          app.args.push_back(parse_term(ctx));
        }
      }
      expect(Tok::rparen, "')'");
      return Term(std::move(app));
    }
    if (ctx.resolve_names && arch_.has_constant(name)) return Term::constant(name);
    if (ctx.resolve_names && !arch_.find_variable(name))
      throw ParseError(tok.span, {"a declared variable, constant, or function"},
                       tok.text);
    VariableRef ref{name, {}, 1};
    if (cur_.kind == Tok::lbracket) {
      advance();
      ref.index = expect_positive_int("positive index");
      expect(Tok::rbracket, "']'");
    }
    if (cur_.kind == Tok::caret) {
      advance();
      ref.history = expect_positive_int("positive history depth");
    }
    return Term(std::move(ref));
  }

  // --- queries --------------------------------------------------------------

  Property parse_one_property() {
    Property p;
    if (at_kw("has")) {
      advance();
      std::uint64_t count = 1;
      if (cur_.kind == Tok::caret) {
        advance();
        count = expect_positive_int("positive multiplicity");
      }
      std::string comp = expect_name("component name");
      expect(Tok::lparen, "'('");
      std::string name = expect_name("variable or constant name");
      expect(Tok::rparen, "')'");
      p.node = PropHasVar{comp, name, count};
      return p;
    }
    if (at_kw("hasnone")) {
      advance();
      std::string comp = expect_name("component name");
      expect(Tok::lparen, "'('");
      std::string name = expect_name("variable or constant name");
      expect(Tok::rparen, "')'");
      p.node = PropHasNoneVar{comp, name};
      return p;
    }
    if (at_kw("knows")) {
      advance();
      std::string comp = expect_name("component name");
      expect(Tok::lparen, "'('");
      Equation eq = parse_equation(TermCtx{false, false});
      expect(Tok::rparen, "')'");
      p.node = PropKnow{comp, std::move(eq)};
      return p;
    }
    fail({"'has'", "'hasnone'", "'knows'"});
  }

  Lexer lexer_;
  Token cur_;
  Architecture arch_;
  bool standalone_ = false;  // parsing a fragment with no declarations in scope
};

// --- name resolution for queries -------------------------------------------

Term resolve_term(const Term& t, const Architecture& arch) {
  if (const auto* v = std::get_if<VariableRef>(&t.node)) {
    if (arch.find_variable(v->var)) return t;
    if (arch.has_constant(v->var) && !v->index && v->history == 1)
      return Term::constant(v->var);
    throw std::invalid_argument("unknown name in query: " + v->var);
  }
  if (const auto* c = std::get_if<ConstRef>(&t.node)) {
    if (arch.has_constant(c->name)) return t;
    if (arch.find_variable(c->name)) return Term::var(c->name);
    throw std::invalid_argument("unknown name in query: " + c->name);
  }
  if (std::holds_alternative<MetaVar>(t.node))
    throw std::invalid_argument("metavariable in query: " + to_string(t));
  const auto& a = std::get<Apply>(t.node);
  // "derive" is the built-in marker generated traces use for computations
  // licensed by a dependence relation; it is never a declared function.
  if (a.fn != "derive" && !arch.find_function(a.fn))
    throw std::invalid_argument("unknown function in query: " + a.fn);
  Apply out{a.fn, {}};
  out.args.reserve(a.args.size());
  for (const Term& arg : a.args) out.args.push_back(resolve_term(arg, arch));
  return Term(std::move(out));
}

}  // namespace

Architecture parse_architecture(const std::string& text) {
  return Parser(text).parse_file();
}

Property parse_query(const std::string& text) {
  return Parser(text).parse_query_text();
}

Equation parse_equation_text(const std::string& text) {
  return Parser(text).parse_equation_entry();
}

Statement parse_statement_text(const std::string& text) {
  return Parser(text).parse_statement_entry();
}

Term parse_term_text(const std::string& text) {
  return Parser(text).parse_term_entry();
}

Term resolve_term_names(const Term& t, const Architecture& arch) {
  return resolve_term(t, arch);
}

Equation resolve_equation_names(const Equation& eq, const Architecture& arch) {
  Equation out = eq;
  for (Term& t : out.args) t = resolve_term(t, arch);
  return out;
}

Statement resolve_statement_names(const Statement& st, const Architecture& arch) {
  if (const auto* att = std::get_if<Attestation>(&st)) {
    Attestation out{att->issuer, {}};
    out.claims.reserve(att->claims.size());
    for (const Equation& eq : att->claims)
      out.claims.push_back(resolve_equation_names(eq, arch));
    return out;
  }
  const auto& pr = std::get<ProofStatement>(st);
  ProofStatement out{pr.issuer, {}};
  out.payload.reserve(pr.payload.size());
  for (const ProofPayloadItem& item : pr.payload) {
    if (const auto* eq = std::get_if<Equation>(&item)) {
      out.payload.push_back(resolve_equation_names(*eq, arch));
    } else {
      const auto& att = std::get<Attestation>(item);
      Attestation ra{att.issuer, {}};
      ra.claims.reserve(att.claims.size());
      for (const Equation& eq : att.claims)
        ra.claims.push_back(resolve_equation_names(eq, arch));
      out.payload.push_back(std::move(ra));
    }
  }
  return out;
}

namespace {

// Every property form names a component; unlike hasnone subjects, an
// undeclared component is always a malformed query.
void require_component(const Architecture& arch, const ComponentId& comp) {
  if (!arch.has_component(comp))
    throw std::invalid_argument("unknown component in query: " + comp);
}

}  // namespace

Property resolve_property(const Property& p, const Architecture& arch) {
  Property out;
  if (const auto* h = std::get_if<PropHasVar>(&p.node)) {
    require_component(arch, h->comp);
    if (arch.find_variable(h->var)) {
      out.node = *h;
    } else if (arch.has_constant(h->var)) {
      if (h->count > 1)
        throw std::invalid_argument("constant '" + h->var +
                                    "' cannot carry a multiplicity in a query");
      out.node = PropHasConst{h->comp, h->var};
    } else {
      throw std::invalid_argument("unknown name in query: " + h->var);
    }
  } else if (const auto* h2 = std::get_if<PropHasConst>(&p.node)) {
    require_component(arch, h2->comp);
    if (arch.has_constant(h2->konst)) {
      out.node = *h2;
    } else if (arch.find_variable(h2->konst)) {
      out.node = PropHasVar{h2->comp, h2->konst, 1};
    } else {
      throw std::invalid_argument("unknown name in query: " + h2->konst);
    }
  } else if (const auto* n = std::get_if<PropHasNoneVar>(&p.node)) {
    // Absence of an undeclared name is well-posed (nothing can yield it), so
    // hasnone queries tolerate unknown names; they stay variable references.
    require_component(arch, n->comp);
    if (arch.has_constant(n->var))
      out.node = PropHasNoneConst{n->comp, n->var};
    else
      out.node = *n;
  } else if (const auto* n2 = std::get_if<PropHasNoneConst>(&p.node)) {
    require_component(arch, n2->comp);
    if (!arch.has_constant(n2->konst) && arch.find_variable(n2->konst))
      out.node = PropHasNoneVar{n2->comp, n2->konst};
    else
      out.node = *n2;
  } else if (const auto* k = std::get_if<PropKnow>(&p.node)) {
    require_component(arch, k->comp);
    Equation eq = k->eq;
    for (Term& t : eq.args) t = resolve_term(t, arch);
    out.node = PropKnow{k->comp, std::move(eq)};
  } else {
    const auto& c = std::get<PropConj>(p.node);
    PropConj conj;
    conj.parts.reserve(c.parts.size());
    for (const Property& part : c.parts)
      conj.parts.push_back(resolve_property(part, arch));
    out.node = std::move(conj);
  }
  return out;
}

}  // namespace archproof
