#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "eam/difftest.hpp"
#include "eam/generate.hpp"
#include "eam/lang_typing.hpp"

using namespace eam;

TEST_CASE("generator determinism") {
  GenConfig cfg;
  cfg.seed = 99;
  cfg.max_size = 30;
  TermPtr a = gen_typed_program(cfg);
  TermPtr b = gen_typed_program(cfg);
  CHECK(print_term(a) == print_term(b));
  CHECK(alpha_eq(a, b));

  cfg.seed = 100;
  TermPtr c = gen_typed_program(cfg);
  // different seeds almost surely differ; eleven shots make a flake unlikely
  bool some_different = !alpha_eq(a, c);
  for (std::uint64_t s = 101; s < 110 && !some_different; ++s) {
    cfg.seed = s;
    some_different = !alpha_eq(a, gen_typed_program(cfg));
  }
  CHECK(some_different);
}

TEST_CASE("budget-exhausted generation falls back to literals") {
  GenConfig cfg;
  cfg.seed = 7;
  cfg.max_size = 1;
  TermPtr t = gen_typed_program(cfg);
  CHECK(term_size(t) <= 8);
  auto p = infer_pcf({}, t);
  REQUIRE(p.ok());
  CHECK(itype_is_instance(p.value(), int_type()));

  // arrow targets fall back to an eta-expanded literal
  cfg.target = arrow_type(int_type(), arrow_type(int_type(), int_type()));
  TermPtr f = gen_typed_program(cfg);
  auto pf = infer_pcf({}, f);
  REQUIRE(pf.ok());
  CHECK(itype_is_instance(pf.value(), cfg.target));
}

TEST_CASE("difftest on a small batch") {
  GenConfig cfg;
  cfg.seed = 4242;
  cfg.max_size = 30;
  std::ostringstream sink;
  DiffReport rep = difftest(cfg, 60, 20000, 50, &sink, true);
  CHECK(rep.disagree == 0);
  CHECK(rep.fault == 0);
  CHECK(rep.ok + rep.timeout == 60);
  CHECK(rep.cases.size() == 60);

  // the report stream has one record per case plus the summary
  std::string text = sink.str();
  std::size_t lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  CHECK(lines == 61);
  CHECK(text.find("TOTAL ok=") != std::string::npos);
  CHECK(text.find(rep.summary()) != std::string::npos);

  // determinism of the whole report
  std::ostringstream sink2;
  difftest(cfg, 60, 20000, 50, &sink2, false);
  CHECK(sink2.str() == text);
}

TEST_CASE("difftest flags an injected disagreement via outcomes") {
  // sanity-check the verdict logic on constructed outcomes
  DiffOutcome a = DiffOutcome::num(3);
  DiffOutcome b = DiffOutcome::num(4);
  CHECK(a.show() == "3");
  CHECK(b.show() == "4");
  CHECK(DiffOutcome::timeout().show() == "timeout");
  CHECK(DiffOutcome::fault("err").show() == "fault:err");
}

TEST_CASE("paper examples agree across the three semantics") {
  auto agree_at = [&](const char* src, std::uint64_t expect) {
    auto pr = parse_term(src);
    REQUIRE(pr.ok());
    TermPtr t = pr.value();

    Outcome p = eval_pcf(t, 100000);
    REQUIRE(p.is_value());
    CHECK(*p.value.numeral == expect);

    Outcome e = eval_epcf(nullptr, t, 100000);
    REQUIRE(e.is_value());
    CHECK(*e.value.numeral == expect);

    AddressTable table;
    Address a = compile_program(table, t);
    RunResult r = run(table, table.lookup(a), 1u << 22);
    REQUIRE(r.status == RunResult::Status::Final);
    CHECK(numeral_shape(r.machine) == expect);
  };
  agree_at("(\\x. succ x) 0", 1);
  agree_at("(\\x. x) 4", 4);
  agree_at("(\\s n. s (s n)) (\\x. succ x) 1", 3);
  agree_at("fix (\\f x y. ifz y x (f (succ x) (pred y))) 5 1", 6);
}
