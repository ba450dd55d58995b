#include <catch2/catch_amalgamated.hpp>

#include "eam/frontend.hpp"
#include "eam/generate.hpp"

using namespace eam;

TEST_CASE("parse basics") {
  auto r = parse_term("(\\x. succ x) 0");
  REQUIRE(r.ok());
  const TermPtr& t = r.value();
  REQUIRE(t->kind == TermKind::Apply);
  REQUIRE(t->child0->kind == TermKind::Lambda);
  CHECK(t->child0->subst == nullptr);
  CHECK(t->child0->child0->kind == TermKind::Succ);
  CHECK(t->child1->kind == TermKind::Zero);

  // literal desugaring
  auto lit = parse_term("3");
  REQUIRE(lit.ok());
  CHECK(numeral_of(lit.value()) == 3);

  // explicit substitution on the innermost binder
  auto es = parse_term("\\x { y <- ({}, 0) } . succ y");
  REQUIRE(es.ok());
  REQUIRE(es.value()->kind == TermKind::Lambda);
  REQUIRE(subst_length(es.value()->subst) == 1);
  const SubstBinding& b = es.value()->subst->binding;
  CHECK(b.var.name == "y");
  CHECK(b.closure.subst == nullptr);
  CHECK(b.closure.term->kind == TermKind::Zero);
  // the body's y is the bound one
  CHECK(es.value()->child0->child0->var.uid == b.var.uid);
}

TEST_CASE("application is left-associative and binds tighter than lambda") {
  auto r = parse_term("\\f x. f x x");
  REQUIRE(r.ok());
  const TermPtr& body = r.value()->child0->child0;
  REQUIRE(body->kind == TermKind::Apply);
  CHECK(body->child0->kind == TermKind::Apply);

  // multi-binder sugar expands to nested single-binder lambdas
  auto m = parse_term("\\x y. x");
  REQUIRE(m.ok());
  CHECK(m.value()->kind == TermKind::Lambda);
  CHECK(m.value()->subst == nullptr);
  CHECK(m.value()->child0->kind == TermKind::Lambda);
}

TEST_CASE("prefix operators take atoms") {
  CHECK(!parse_term("succ succ 0").ok());
  CHECK(parse_term("succ (succ 0)").ok());
  auto r = parse_term("ifz 0 1 (succ 0)");
  REQUIRE(r.ok());
  CHECK(r.value()->kind == TermKind::Ifz);
  // prefix forms can head an application
  auto s = parse_term("succ x y");
  REQUIRE(s.ok());
  CHECK(s.value()->kind == TermKind::Apply);
  CHECK(s.value()->child0->kind == TermKind::Succ);
}

TEST_CASE("comments and errors") {
  auto ok = parse_term("succ 0 -- adds one\n");
  CHECK(ok.ok());

  auto dup = parse_term("\\x { y <- ({}, 0), y <- ({}, 1) } . y");
  REQUIRE(!dup.ok());
  CHECK(dup.error().message.find("duplicate") != std::string::npos);

  auto bad = parse_term("(\\x. x");
  REQUIRE(!bad.ok());
  CHECK(!bad.error().message.empty());

  auto trailing = parse_term("0 )");
  CHECK(!trailing.ok());

  CHECK(!parse_term("pred").ok());
  CHECK(!parse_term("\\. x").ok());
}

TEST_CASE("closure terms are scoped to their own substitution") {
  // the x inside the binding does not refer to the enclosing binder
  auto r = parse_term("\\x { y <- ({}, x) } . y");
  REQUIRE(r.ok());
  const TermPtr& lam = r.value();
  const TermPtr& inner = lam->subst->binding.closure.term;
  REQUIRE(inner->kind == TermKind::Variable);
  CHECK(inner->var.uid != lam->var.uid);
}

TEST_CASE("print examples") {
  CHECK(print_term(mk_zero()) == "0");
  CHECK(print_term(mk_succ(mk_succ(mk_zero()))) == "2");
  Var x = fresh_var("x");
  CHECK(print_term(mk_lambda(x, nullptr, mk_variable(x))) == "\\x. x");
}

TEST_CASE("parse/print round trip on hand terms") {
  for (const char* src : {
           "\\x. x",
           "(\\x. succ x) 0",
           "\\f x y. ifz y x (f (succ x) (pred y))",
           "fix (\\f x y. ifz y x (f (succ x) (pred y))) 5 1",
           "\\x { y <- ({}, 0), z <- ({y <- ({}, 2)}, succ y) } . ifz z x y",
           "succ (pred (succ 0))",
           "(\\s n. s (s n)) (\\x. succ x) 1",
       }) {
    auto t = parse_term(src);
    INFO(src);
    REQUIRE(t.ok());
    std::string printed = print_term(t.value());
    auto back = parse_term(printed);
    INFO(printed);
    REQUIRE(back.ok());
    CHECK(alpha_eq(t.value(), back.value()));
  }
}

TEST_CASE("round trip on generated terms") {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    cfg.max_size = 24;
    TermPtr t = gen_typed_program(cfg);
    std::string printed = print_term(t);
    auto back = parse_term(printed);
    INFO(printed);
    REQUIRE(back.ok());
    CHECK(alpha_eq(t, back.value()));
  }
}

TEST_CASE("type parsing") {
  auto a = parse_type("int -> int -> int");
  REQUIRE(a.ok());
  CHECK(show_type(a.value()) == "int -> int -> int");
  CHECK(a.value()->is_arrow());
  CHECK(a.value()->cod()->is_arrow());

  auto b = parse_type("(int -> int) -> int");
  REQUIRE(b.ok());
  CHECK(b.value()->dom()->is_arrow());
  CHECK(show_type(b.value()) == "(int -> int) -> int");

  auto c = parse_type("int");
  REQUIRE(c.ok());
  CHECK(c.value()->is_ground());

  CHECK(!parse_type("int ->").ok());
  CHECK(!parse_type("bool").ok());
}
