#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "eam/dump.hpp"
#include "eam/run.hpp"
#include "eam/table.hpp"

using namespace eam;

namespace {

// Succ1 = <R0, Load 0; Succ 0 0; Call 0, []>
Machine succ1_machine() {
  return make_machine({std::nullopt},
                      {Instruction::load(0), Instruction::succ(0, 0), Instruction::call(0)}, {});
}

// Succ2 = <R0 R1, Load 0; Load 1; App 0 1 1; App 0 1 1; Call 1, [#Succ1]>
Machine succ2_machine(AddressTable& t) {
  Address s1 = t.intern(succ1_machine());
  return make_machine({std::nullopt, std::nullopt},
                      {Instruction::load(0), Instruction::load(1), Instruction::app(0, 1, 1),
                       Instruction::app(0, 1, 1), Instruction::call(1)},
                      {s1});
}

// Add_aux = <R0..R4, Load (0,1,2); Pred 1 3; Succ 2 4; App 0 3 0; App 0 4 0;
//            Test 1 2 0 0; Call 0, []>
Machine add_aux_machine() {
  return make_machine(
      std::vector<std::optional<Address>>(5),
      {Instruction::load(0), Instruction::load(1), Instruction::load(2), Instruction::pred(1, 3),
       Instruction::succ(2, 4), Instruction::app(0, 3, 0), Instruction::app(0, 4, 0),
       Instruction::test(1, 2, 0, 0), Instruction::call(0)},
      {});
}

// Add = Y_0 . [#Add_aux]
Address add_machine(AddressTable& t) {
  return t.apply(Address::fix(0), t.intern(add_aux_machine()));
}

// I = <R0 = _, Load 0; Call 0, []>
Machine identity_machine() {
  return make_machine({std::nullopt}, {Instruction::load(0), Instruction::call(0)}, {});
}

std::optional<std::uint64_t> run_to_numeral(AddressTable& t, const Machine& m, std::uint64_t fuel) {
  RunResult r = run(t, m, fuel);
  if (r.status != RunResult::Status::Final) return std::nullopt;
  return numeral_shape(r.machine);
}

}  // namespace

TEST_CASE("step basics") {
  AddressTable t;
  // numeral machines are final
  CHECK(step(t, numeral_machine(4)).kind == StepResult::Kind::Final);
  // stuck machines are final, not errors
  CHECK(step(t, identity_machine()).kind == StepResult::Kind::Final);

  // Pred on zero stays at zero
  Machine m = make_machine({Address::num(0)}, {Instruction::pred(0, 0), Instruction::call(0)}, {});
  StepResult sr = step(t, m);
  REQUIRE(sr.kind == StepResult::Kind::Next);
  CHECK(*sr.next.regs[0] == Address::num(0));

  // Succ on a final non-numeral raises err
  Address i = t.intern(identity_machine());
  Machine bad = make_machine({i}, {Instruction::succ(0, 0), Instruction::call(0)}, {});
  CHECK(step(t, bad).kind == StepResult::Kind::Err);
}

TEST_CASE("paper runs: Succ1, Succ2, Add") {
  AddressTable t;
  CHECK(run_to_numeral(t, append_tape(succ1_machine(), {Address::num(0)}), 1000) == 1);
  CHECK(run_to_numeral(t, append_tape(succ2_machine(t), {Address::num(1)}), 1000) == 3);

  Address add = add_machine(t);
  CHECK(run_to_numeral(t, append_tape(t.lookup(add), {Address::num(1), Address::num(3)}), 10000) == 4);
  CHECK(run_to_numeral(t, append_tape(t.lookup(add), {Address::num(5), Address::num(1)}), 10000) == 6);
  CHECK(run_to_numeral(t, append_tape(t.lookup(add), {Address::num(0), Address::num(0)}), 10000) == 0);
}

TEST_CASE("Y_0 unfolding reaches I applied to the recursion address") {
  AddressTable t;
  Address i = t.intern(identity_machine());
  Machine y0i = append_tape(t.lookup(Address::fix(0)), {i});
  Address y0i_addr = t.intern(y0i);

  // Y_0 . [#I] ->> I . [#(Y_0 . [#I])] in exactly 4 steps
  Machine m = y0i;
  for (int k = 0; k < 4; ++k) {
    StepResult sr = step(t, m);
    REQUIRE(sr.kind == StepResult::Kind::Next);
    m = sr.next;
  }
  Address want = t.intern(append_tape(identity_machine(), {t.apply(Address::fix(0), i)}));
  CHECK(t.intern(m) == want);
  // and that target is I . [#(Y_0 . [#I])]
  CHECK(t.lookup(want).tape[0] == y0i_addr);

  // the loop cycles: run with cycle detection reports divergence
  RunOptions opt;
  opt.detect_cycles = true;
  RunResult r = run(t, y0i, 1000, opt);
  CHECK(r.status == RunResult::Status::Timeout);
  CHECK(r.cycle);
  // without detection it burns the full fuel
  RunResult r2 = run(t, y0i, 1000);
  CHECK(r2.status == RunResult::Status::Timeout);
  CHECK(r2.steps == 1000);
}

TEST_CASE("Y_n unfolding law") {
  // Y_n . [#M, d1..dn] ->> M . [d1..dn, #(Y_n . [#M, d..])], address-exact
  AddressTable t;
  std::mt19937_64 rng(42);

  std::vector<Address> pool = {Address::num(0), Address::num(1), Address::num(7),
                               t.intern(identity_machine()), t.intern(succ1_machine()),
                               t.intern(add_aux_machine())};

  for (std::uint64_t n = 0; n <= 2; ++n) {
    for (int rep = 0; rep < 10; ++rep) {
      Address m_addr = pool[rng() % pool.size()];
      std::vector<Address> ds;
      for (std::uint64_t k = 0; k < n; ++k) ds.push_back(pool[rng() % pool.size()]);

      std::vector<Address> args;
      args.push_back(m_addr);
      args.insert(args.end(), ds.begin(), ds.end());
      Machine start = append_tape(t.lookup(Address::fix(n)), args);
      Address start_addr = t.intern(start);

      std::vector<Address> want_tape = ds;
      want_tape.push_back(start_addr);
      Address want = t.intern(append_tape(t.lookup(m_addr), want_tape));

      Machine m = start;
      std::uint64_t steps = 3 * n + 4;
      for (std::uint64_t k = 0; k < steps; ++k) {
        StepResult sr = step(t, m);
        REQUIRE(sr.kind == StepResult::Kind::Next);
        m = sr.next;
      }
      CHECK(t.intern(m) == want);
    }
  }
}

TEST_CASE("tape extension lemma") {
  // if M ->> M' in k steps then M.[a] ->> M'.[a] passing the same states
  AddressTable t;
  Address extra = t.intern(numeral_machine(9));

  std::vector<Machine> samples = {
      append_tape(succ1_machine(), {Address::num(3)}),
      append_tape(succ2_machine(t), {Address::num(0)}),
      append_tape(t.lookup(add_machine(t)), {Address::num(2), Address::num(2)}),
      identity_machine(),
      numeral_machine(0),
  };

  for (const Machine& m0 : samples) {
    // collect the first k states of the original run
    std::vector<Machine> states;
    Machine m = m0;
    for (int k = 0; k < 40; ++k) {
      states.push_back(m);
      StepResult sr = step(t, m);
      if (sr.kind != StepResult::Kind::Next) break;
      m = sr.next;
    }
    Machine ext = append_tape(m0, {extra});
    for (std::size_t k = 0; k < states.size(); ++k) {
      CHECK(ext == append_tape(states[k], {extra}));
      StepResult sr = step(t, ext);
      if (k + 1 < states.size()) {
        REQUIRE(sr.kind == StepResult::Kind::Next);
        ext = sr.next;
      }
    }
  }
}

TEST_CASE("step determinism") {
  AddressTable t;
  Machine m = append_tape(t.lookup(add_machine(t)), {Address::num(2), Address::num(1)});
  for (int k = 0; k < 200; ++k) {
    StepResult a = step(t, m);
    StepResult b = step(t, m);
    REQUIRE(a.kind == b.kind);
    if (a.kind != StepResult::Kind::Next) break;
    CHECK(a.next == b.next);
    m = a.next;
  }
}

TEST_CASE("interconvertibility") {
  AddressTable t;
  Address i = t.intern(identity_machine());

  // reflexivity at fuel 1
  CHECK(interconvertible(t, i, i, 1).related);

  // #(Succ2 . [1]) <-> num:3
  Address s21 = t.intern(append_tape(succ2_machine(t), {Address::num(1)}));
  CHECK(interconvertible(t, s21, Address::num(3), 1000).related);

  // distinct numerals are final and distinct
  auto r = interconvertible(t, Address::num(1), Address::num(2), 100);
  CHECK(!r.related);
  CHECK(!r.fuel_exhausted);

  // I . [num:4] <-> num:4
  Address i4 = t.apply(i, Address::num(4));
  CHECK(interconvertible(t, i4, Address::num(4), 100).related);

  // fuel exhaustion is reported
  Address omega = t.intern(append_tape(t.lookup(Address::fix(0)), {i}));
  auto oo = interconvertible(t, omega, Address::num(0), 3);
  CHECK(!oo.related);
  CHECK(oo.fuel_exhausted);
}

TEST_CASE("run reports errors") {
  AddressTable t;
  Address i = t.intern(identity_machine());
  Machine bad = make_machine({i}, {Instruction::pred(0, 0), Instruction::call(0)}, {});
  RunResult r = run(t, bad, 100);
  CHECK(r.status == RunResult::Status::Error);
}

TEST_CASE("machine dump round trip") {
  AddressTable t;
  Address add = add_machine(t);
  std::string text = dump_machine(t, add);

  // root first, then referenced cells ascending
  CHECK(text.rfind("machine " + show_address(add), 0) == 0);

  AddressTable t2;
  auto back = load_dump(t2, text);
  REQUIRE(back.ok());
  // the reloaded machine computes the same results
  CHECK(run_to_numeral(t2, append_tape(t2.lookup(back.value()), {Address::num(2), Address::num(3)}),
                       10000) == 5);

  // reloading into the same table is the identity on addresses
  auto same = load_dump(t, text);
  REQUIRE(same.ok());
  CHECK(same.value() == add);
}

TEST_CASE("dump of a numeral machine") {
  AddressTable t;
  std::string text = dump_machine(t, Address::num(5));
  CHECK(text == "machine num:5 { regs=[num:5]; prog=-; tape=[] }\n");
  AddressTable t2;
  auto back = load_dump(t2, text);
  REQUIRE(back.ok());
  CHECK(back.value() == Address::num(5));
}

TEST_CASE("trace lines") {
  AddressTable t;
  Machine m = append_tape(succ1_machine(), {Address::num(0)});
  CHECK(trace_state_line(0, m) == "step 0 | LOAD 0 | regs=[_] | tape=[num:0]");
  CHECK(trace_state_line(3, numeral_machine(1)) == "step 3 | FINAL | regs=[num:1] | tape=[]");
}
