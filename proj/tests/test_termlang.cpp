#include <doctest.h>

#include "lgrp/termlang.hpp"
#include "term_gen.hpp"

using namespace lgrp;

namespace {

const DescriptorPtr Z = Descriptor::integers();
const DescriptorPtr Z2 = Descriptor::zpow(2);

Elem zi(long long v) { return make_elem(Z, {Int(v)}); }
Elem z2(long long a, long long b) { return make_elem(Z2, {Int(a), Int(b)}); }

std::string reparse_render(const std::string& src) { return render_term(parse_term(src)); }

}  // namespace

TEST_CASE("parsing honors precedence and associativity") {
  // join is loosest, meet binds tighter, product tighter still
  auto t = parse_term("x \\/ y /\\ z");
  REQUIRE(t->kind() == Term::Kind::Join);
  CHECK(t->right()->kind() == Term::Kind::Meet);

  auto u = parse_term("x /\\ y * z");
  REQUIRE(u->kind() == Term::Kind::Meet);
  CHECK(u->right()->kind() == Term::Kind::Mul);

  auto v = parse_term("x * y^-1");
  REQUIRE(v->kind() == Term::Kind::Mul);
  CHECK(v->right()->kind() == Term::Kind::Inv);

  // binary operators associate left
  auto w = parse_term("x * y * z");
  REQUIRE(w->kind() == Term::Kind::Mul);
  CHECK(w->left()->kind() == Term::Kind::Mul);
  CHECK(w->right()->kind() == Term::Kind::Var);

  // parentheses override
  auto p = parse_term("(x \\/ y) /\\ z");
  REQUIRE(p->kind() == Term::Kind::Meet);
  CHECK(p->left()->kind() == Term::Kind::Join);

  // sugar heads
  CHECK(parse_term("abs(x)")->kind() == Term::Kind::Abs);
  CHECK(parse_term("pos(x * y)")->kind() == Term::Kind::Pos);
  CHECK(parse_term("neg(x)")->kind() == Term::Kind::Neg);
  // "abs2" and "absx" are ordinary identifiers
  CHECK(parse_term("abs2")->kind() == Term::Kind::Var);
  CHECK(parse_term("e")->kind() == Term::Kind::Unit);
  CHECK(parse_term("eel")->kind() == Term::Kind::Var);  // not the unit keyword
}

TEST_CASE("syntax errors carry position and expectations") {
  try {
    parse_term("x \\/ ");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 1);
    CHECK(e.column == 6);
    CHECK(std::string(e.what()).find("expected") != std::string::npos);
    CHECK(std::string(e.what()).find("identifier") != std::string::npos);
  }

  try {
    parse_term("(x \\/ y");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(std::string(e.what()).find("')'") != std::string::npos);
    CHECK(e.column == 8);
  }

  // '^' alone is not a token
  CHECK_THROWS_AS(parse_term("x ^ 2"), SyntaxError);
  // a space between the sugar head and its parenthesis breaks the token
  CHECK_THROWS_AS(parse_term("abs (x)"), SyntaxError);
  // grammar allows at most one inverse marker per atom
  CHECK_THROWS_AS(parse_term("x^-1^-1"), SyntaxError);
  // errors report multi-line positions
  try {
    parse_term("x \\/\n  )");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 3);
  }
}

TEST_CASE("rendering round-trips structurally") {
  // frozen concrete forms with minimal parentheses
  CHECK(reparse_render("x\\/y/\\z") == "x \\/ y /\\ z");
  CHECK(reparse_render("(x\\/y)/\\z") == "(x \\/ y) /\\ z");
  CHECK(reparse_render("(x*y)^-1") == "(x * y)^-1");
  CHECK(reparse_render("x*(y*z)") == "x * (y * z)");
  CHECK(reparse_render("x*y*z") == "x * y * z");
  CHECK(reparse_render("abs(x\\/y)") == "abs(x \\/ y)");
  CHECK(reparse_render("x^-1") == "x^-1");
  CHECK(reparse_render("(x^-1)^-1") == "(x^-1)^-1");

  // property: parse . render is the identity on random term trees
  SampleStream s(2024);
  for (int i = 0; i < 400; ++i) {
    TermPtr t = testgen::random_term(s, 5);
    TermPtr back = parse_term(render_term(t));
    CHECK(back->same_term(*t));
  }
}

TEST_CASE("evaluation matches the element operations") {
  Env env{{"x", zi(3)}, {"y", zi(5)}};
  // the join of two elements, written through product and meet
  CHECK(to_string(eval_term(parse_term("x*(x/\\y)^-1*y"), env, Z)) == "5");
  CHECK(to_string(eval_term(parse_term("x \\/ y"), env, Z)) == "5");

  Env env2{{"x", z2(2, -5)}};
  CHECK(to_string(eval_term(parse_term("pos(x)"), env2, Z2)) == "(2,0)");
  CHECK(to_string(eval_term(parse_term("neg(x)"), env2, Z2)) == "(0,-5)");
  CHECK(to_string(eval_term(parse_term("abs(x)"), env2, Z2)) == "(2,5)");
  CHECK(to_string(eval_term(parse_term("e"), env2, Z2)) == "(0,0)");

  CHECK_THROWS_AS(eval_term(parse_term("x * missing"), env, Z), StructuralError);
  Env bad{{"x", z2(1, 2)}};
  CHECK_THROWS_AS(eval_term(parse_term("x"), bad, Z), StructuralError);
}

TEST_CASE("normal forms take the documented shapes") {
  CHECK(normal_form(parse_term("(x /\\ y)^-1")).render() == "x^-1 \\/ y^-1");
  CHECK(normal_form(parse_term("x * (y \\/ z)")).render() == "x * y \\/ x * z");
  CHECK(normal_form(parse_term("x * x^-1 \\/ e")).render() == "e");
  CHECK(normal_form(parse_term("abs(x)")).render() == "x \\/ x^-1");
  CHECK(normal_form(parse_term("pos(x * y^-1)")).render() == "x * y^-1 \\/ e");
  CHECK(normal_form(parse_term("(x /\\ y) * z")).render() == "x * z /\\ y * z");
  CHECK(normal_form(parse_term("x \\/ x")).render() == "x");
  CHECK(normal_form(parse_term("(x \\/ y)^-1 * e")).render() == "x^-1 /\\ y^-1");
  // meets distribute out of joins only outward: join stays outermost
  auto nf = normal_form(parse_term("x /\\ (y \\/ z)"));
  CHECK(nf.joinands.size() == 2);
  CHECK(nf.render() == "x /\\ y \\/ x /\\ z");
}

TEST_CASE("normal form preserves meaning on random terms") {
  SampleStream gen(77);
  SamplerConfig cfg{77, 8, 0};
  auto envs = derived_stream(cfg, "nf-envs");
  int checked = 0;
  for (int i = 0; i < 250; ++i) {
    TermPtr t = testgen::random_term(gen, 5);
    NormalForm nf;
    try {
      nf = normal_form(t);
    } catch (const ResourceError&) {
      continue;  // pathological blowup is exercised separately
    }
    TermPtr nt = nf.to_term();
    for (int k = 0; k < 10; ++k) {
      Env env{{"x", sample_elem(Z2, envs, 8)},
              {"y", sample_elem(Z2, envs, 8)},
              {"z", sample_elem(Z2, envs, 8)}};
      CHECK(eval_term(t, env, Z2) == eval_term(nt, env, Z2));
      ++checked;
    }
  }
  CHECK(checked >= 2000);
}

TEST_CASE("normal form respects its node budget") {
  // each extra (x \/ y) factor doubles the joinand count
  TermPtr t = Term::join(Term::var("x"), Term::var("y"));
  for (int i = 0; i < 17; ++i) t = Term::mul(t, Term::join(Term::var("x"), Term::var("y")));
  try {
    normal_form(t);
    FAIL("expected the node budget to trip");
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("100000") != std::string::npos);
  }
  // a generous budget changes the outcome, proving the knob is real
  CHECK_THROWS_AS(normal_form(parse_term("x \\/ y"), 1), ResourceError);
}

TEST_CASE("identity refutation finds and freezes witnesses") {
  SamplerConfig cfg{0, 16, 4000};

  // product versus join is no identity
  auto r = refute_identity(parse_term("x * y"), parse_term("x \\/ y"), Z, cfg);
  REQUIRE(r.has_value());
  Elem l = eval_term(parse_term("x * y"), r->witness, Z);
  Elem rr = eval_term(parse_term("x \\/ y"), r->witness, Z);
  CHECK(l != rr);
  CHECK(l == r->lhs);
  CHECK(rr == r->rhs);

  // the refuter reports the lexicographically smallest sampled witness, so
  // two runs agree exactly
  auto r2 = refute_identity(parse_term("x * y"), parse_term("x \\/ y"), Z, cfg);
  REQUIRE(r2.has_value());
  CHECK(r->witness.at("x") == r2->witness.at("x"));
  CHECK(r->witness.at("y") == r2->witness.at("y"));

  // positive parts do not distribute over products; cross-check the refuter
  // against an exhaustive box oracle
  auto lhs = parse_term("pos(x * y)");
  auto rhs = parse_term("pos(x) * pos(y)");
  bool oracle_found = false;
  for (int x = -2; x <= 2 && !oracle_found; ++x)
    for (int y = -2; y <= 2 && !oracle_found; ++y) {
      Env env{{"x", zi(x)}, {"y", zi(y)}};
      oracle_found = eval_term(lhs, env, Z) != eval_term(rhs, env, Z);
    }
  CHECK(oracle_found);
  auto rf = refute_identity(lhs, rhs, Z, cfg);
  REQUIRE(rf.has_value());
  CHECK(eval_term(lhs, rf->witness, Z) != eval_term(rhs, rf->witness, Z));

  // a genuine identity survives the full budget
  CHECK_FALSE(refute_identity(parse_term("x*(x/\\y)^-1*y"), parse_term("x \\/ y"), Z2, cfg)
                  .has_value());
}

TEST_CASE("division witness terms certify protomodularity") {
  // t1(x,y) = x^-1 y, t(x,z) = x z
  Env env{{"x", zi(4)}, {"y", zi(9)}};
  CHECK(to_string(eval_term(parse_term("x^-1 * y"), env, Z)) == "5");
  CHECK(to_string(eval_term(parse_term("x * (x^-1 * y)"), env, Z)) == "9");

  SamplerConfig cfg{0, 16, 2000};
  for (const char* name : {"Z", "Z^2", "lex(Z,Z)"}) {
    auto rep = check_protomodular_witness(parse_descriptor(name), cfg);
    INFO(name);
    CHECK(rep.status == Status::pass);
  }
}
