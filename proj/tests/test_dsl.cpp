#include <doctest.h>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "archproof/arch.hpp"
#include "archproof/corpus.hpp"
#include "archproof/dsl.hpp"

using namespace archproof;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(bool(in), "cannot open ", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_SUITE_BEGIN("surface syntax");

TEST_CASE("render/parse round-trip on every corpus entry") {
  for (const std::string& name : corpus_names()) {
    CAPTURE(name);
    Architecture a = instantiate_corpus(name);
    std::string text = render(a);
    Architecture back = parse_architecture(text);
    CHECK(back == a);
    CHECK(render(back) == text);  // canonical form is a fixpoint
  }
}

TEST_CASE("checked-in corpus files match the built-in corpus byte for byte") {
  for (const std::string& name : corpus_names()) {
    CAPTURE(name);
    std::string file = slurp("corpus/" + name + ".parch");
    CHECK(file == render(instantiate_corpus(name)));
    CHECK(render(parse_architecture(file)) == file);
  }
}

TEST_CASE("comments and blank lines are tolerated") {
  Architecture a = parse_architecture(
      "# header comment\n"
      "component I;\n"
      "\n"
      "var x range 1;  # trailing comment\n"
      "has^inf I(x);\n");
  CHECK(a.components.size() == 1);
  CHECK(a.variables.size() == 1);
  CHECK(a.primitives.size() == 1);
}

TEST_CASE("declaration-before-use is enforced at parse time") {
  CHECK_THROWS_AS(parse_architecture("has^inf I(x);"), ParseError);
  CHECK_THROWS_AS(parse_architecture("component I; has^inf I(x);"), ParseError);
  CHECK_THROWS_AS(
      parse_architecture("component I; var x range 1; compute^inf {I} x = F(x);"),
      ParseError);  // F undeclared
}

TEST_CASE("parse errors carry position and expectation") {
  try {
    parse_architecture("component I\ncomponent U;");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.span().line == 2);  // the missing ';' is noticed at 'component'
    CHECK(std::string(e.what()).find("';'") != std::string::npos);
    CHECK(e.found() == "component");
  }
}

TEST_CASE("keywords are reserved") {
  CHECK_THROWS_AS(parse_architecture("component var;"), ParseError);
  CHECK_THROWS_AS(parse_architecture("component inf;"), ParseError);
}

TEST_CASE("multiplicity syntax") {
  Architecture a = parse_architecture(
      "component I; var x range 1;\n"
      "has^inf I(x);\n"
      "has^3 I(x);\n");
  auto* p0 = std::get_if<HasVarPrim>(&a.primitives[0]);
  auto* p1 = std::get_if<HasVarPrim>(&a.primitives[1]);
  REQUIRE(p0 != nullptr);
  REQUIRE(p1 != nullptr);
  CHECK(p0->mult.is_infinite());
  CHECK(p1->mult.value() == 3);
  CHECK_THROWS_AS(parse_architecture("component I; var x range 1; has^0 I(x);"),
                  ParseError);
}

TEST_CASE("query parsing covers every property form") {
  Property p = parse_query("has^2 T(ind)");
  auto* hv = std::get_if<PropHasVar>(&p.node);
  REQUIRE(hv != nullptr);
  CHECK(hv->comp == "T");
  CHECK(hv->var == "ind");
  CHECK(hv->count == 2);

  CHECK(std::holds_alternative<PropHasVar>(parse_query("has^1 S(br)").node));
  CHECK(std::holds_alternative<PropHasNoneVar>(parse_query("hasnone S(br)").node));
  CHECK(std::holds_alternative<PropKnow>(
      parse_query("knows T (dec = Mu(br, bs, thr))").node));

  Property conj = parse_query("hasnone S(br) & hasnone U(ebr) & has^1 T(bs)");
  auto* c = std::get_if<PropConj>(&conj.node);
  REQUIRE(c != nullptr);
  CHECK(c->parts.size() == 3);

  Property bare = parse_query("has T(x)");  // count defaults to 1
  CHECK(std::get<PropHasVar>(bare.node).count == 1);
  CHECK_THROWS_AS(parse_query("hasnone S(br) &"), ParseError);
  CHECK_THROWS_AS(parse_query("knows T dec = x"), ParseError);
}

TEST_CASE("resolve_property reclassifies constants and validates names") {
  Architecture a = parse_architecture(
      "component M; var x range 1; const THR;\n"
      "has^inf M(x); has M(THR);\n");

  Property know = parse_query("knows M (x = THR)");
  Property fixed = resolve_property(know, a);
  auto* k = std::get_if<PropKnow>(&fixed.node);
  REQUIRE(k != nullptr);
  CHECK(k->eq.rhs() == Term::constant("THR"));

  // has on a constant becomes a constant-possession property
  Property hc = resolve_property(parse_query("has^1 M(THR)"), a);
  CHECK(std::holds_alternative<PropHasConst>(hc.node));

  // hasnone tolerates unknown names; has/knows do not
  CHECK_NOTHROW(resolve_property(parse_query("hasnone M(ghost)"), a));
  CHECK_THROWS_AS(resolve_property(parse_query("has^1 M(ghost)"), a),
                  std::invalid_argument);
  CHECK_THROWS_AS(resolve_property(parse_query("knows M (x = ghostfn(x))"), a),
                  std::invalid_argument);
}

TEST_CASE("standalone fragments parse without declarations in scope") {
  Equation eq = parse_equation_text("dec = Mu(br, bs, thr)");
  CHECK(to_string(eq) == "dec = Mu(br, bs, thr)");

  Statement att = parse_statement_text("attest I {ebr = Enc(br)}");
  CHECK(statement_issuer(att) == "I");

  Statement prf = parse_statement_text(
      "proof S {ind = F(qr); attest I {qr = Quant(br)}}");
  CHECK(statement_issuer(prf) == "S");

  Term t = parse_term_text("Mu(sbr[1], bs, THR)");
  auto* app = std::get_if<Apply>(&t.node);
  REQUIRE(app != nullptr);
  CHECK(app->args.size() == 3);

  CHECK_THROWS_AS(parse_statement_text("attest I ebr = Enc(br)"), ParseError);
  CHECK_THROWS_AS(parse_term_text("Mu(a,"), ParseError);
}

TEST_CASE("standalone name resolution checks against the architecture") {
  Architecture a = instantiate_corpus("mi-e");
  Term t = resolve_term_names(parse_term_text("Mu(sbr, bs, THR)"), a);
  auto* app = std::get_if<Apply>(&t.node);
  REQUIRE(app != nullptr);
  CHECK(app->args[2] == Term::constant("THR"));
  CHECK_THROWS_AS(resolve_term_names(parse_term_text("Nope(sbr)"), a),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      resolve_statement_names(parse_statement_text("attest I {ghost = Enc(br)}"), a),
      std::invalid_argument);
  Statement st = resolve_statement_names(
      parse_statement_text("attest I {ebr = Enc(br)}"), a);
  CHECK(to_string(st) == "attest I {ebr = Enc(br)}");
}

TEST_CASE("render emits sections in declaration order") {
  std::string text = render(instantiate_corpus("ed"));
  auto pos = [&](const std::string& needle) { return text.find(needle); };
  CHECK(pos("component I;") < pos("var br range 1;"));
  CHECK(pos("var br range 1;") < pos("fun Enc/1;"));
  CHECK(pos("fun Enc/1;") < pos("has^inf I(br);"));
  CHECK(pos("has^inf I(br);") < pos("dep I: ebr <- {br};"));
  CHECK(pos("dep I: ebr <- {br};") < pos("rule: {ebr = Enc(br)} |> br = Dec(ebr);"));
  CHECK(pos("rule:") < pos("functionality {"));
  CHECK(text.back() == '\n');
}

TEST_SUITE_END();
