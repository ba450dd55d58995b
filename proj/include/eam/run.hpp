#pragma once

// Small-step operational semantics for extended addressing machines, with a
// fuel-bounded runner and the common-reduct (interconvertibility) check.

#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "eam/machine.hpp"
#include "eam/table.hpp"

namespace eam {

struct StepResult {
  enum class Kind { Next, Final, Err };
  Kind kind;
  Machine next;  // Next only

  static StepResult final_state() { return StepResult{Kind::Final, {}}; }
  static StepResult err() { return StepResult{Kind::Err, {}}; }
  static StepResult to(Machine m) { return StepResult{Kind::Next, std::move(m)}; }
};

namespace detail {

inline bool machine_final(const Machine& m) { return m.remaining().empty() || is_stuck(m); }

// Load (non-empty tape), App, or Call; the caller rules out everything else.
inline Machine plain_step(AddressTable& t, const Machine& m, bool& err) {
  const Instruction& ins = m.remaining()[0];
  err = false;
  switch (ins.op) {
    case Op::Load: {
      Machine next = m;
      if (ins.i < next.regs.size()) next.regs[ins.i] = next.tape.front();
      next.tape.erase(next.tape.begin());
      next.pc++;
      return next;
    }
    case Op::App: {
      const auto& ri = m.regs[ins.i];
      const auto& rj = m.regs[ins.j];
      if (!ri || !rj) {  // unreachable through valid machines
        err = true;
        return m;
      }
      Machine next = m;
      next.regs[ins.k] = t.apply(*ri, *rj);
      next.pc++;
      return next;
    }
    case Op::Call: {
      const auto& ri = m.regs[ins.i];
      if (!ri) {
        err = true;
        return m;
      }
      return append_tape(t.lookup(*ri), std::span<const Address>(m.tape.data(), m.tape.size()));
    }
    default:
      err = true;
      return m;
  }
}

}  // namespace detail

// One step of the deterministic reduction. For Pred/Succ/Test whose source
// register holds a non-final machine, the inner machine advances one step and
// the register is rewritten to the address of the successor ("forcing"); the
// chain of nested forcings collapses into this single outer step.
//
// `work`, when given, accumulates the number of chain levels touched: a step
// under a forcing chain of depth d costs d address-table rewrites, so fuel
// alone does not bound the table traffic of a run.
inline StepResult step(AddressTable& t, const Machine& m, std::uint64_t* work = nullptr) {
  auto rem = m.remaining();
  if (rem.empty()) return StepResult::final_state();
  const Instruction& ins = rem[0];

  switch (ins.op) {
    case Op::Load:
      if (m.tape.empty()) return StepResult::final_state();  // stuck, not an error
      [[fallthrough]];
    case Op::App:
    case Op::Call: {
      bool err = false;
      Machine next = detail::plain_step(t, m, err);
      if (err) return StepResult::err();
      if (work) *work += 1;
      return StepResult::to(std::move(next));
    }
    case Op::Pred:
    case Op::Succ:
    case Op::Test:
      break;
  }

  // forcing chain: machines whose head instruction inspects a register
  std::vector<Machine> chain;
  chain.push_back(m);
  for (;;) {
    const Machine& cur = chain.back();
    const Instruction& cins = cur.remaining()[0];
    const auto& src = cur.regs[cins.i];
    if (!src) return StepResult::err();  // unreachable through valid machines
    Address inner_addr = *src;
    const Machine& inner = t.lookup(inner_addr);

    if (detail::machine_final(inner)) {
      // unconditional rule at the current level
      Machine acted = cur;
      switch (cins.op) {
        case Op::Pred: {
          if (!inner_addr.is_num()) return StepResult::err();
          std::uint64_t n = inner_addr.index;
          acted.regs[cins.j] = Address::num(n == 0 ? 0 : n - 1);
          break;
        }
        case Op::Succ: {
          if (!inner_addr.is_num()) return StepResult::err();
          acted.regs[cins.j] = Address::num(inner_addr.index + 1);
          break;
        }
        case Op::Test: {
          if (!inner_addr.is_num()) return StepResult::err();
          const auto& branch = inner_addr.index == 0 ? cur.regs[cins.j] : cur.regs[cins.k];
          if (!branch) return StepResult::err();
          acted.regs[cins.l] = *branch;
          break;
        }
        default:
          return StepResult::err();
      }
      acted.pc++;
      // rewrite the registers of the levels above
      if (work) *work += chain.size();
      Machine result = std::move(acted);
      for (std::size_t lv = chain.size() - 1; lv-- > 0;) {
        Machine up = chain[lv];
        up.regs[up.remaining()[0].i] = t.intern(result);
        result = std::move(up);
      }
      return StepResult::to(std::move(result));
    }

    const Instruction& iins = inner.remaining()[0];
    if (iins.op == Op::Pred || iins.op == Op::Succ || iins.op == Op::Test) {
      chain.push_back(inner);
      continue;
    }

    bool err = false;
    Machine result = detail::plain_step(t, inner, err);
    if (err) return StepResult::err();  // inner error propagates
    if (work) *work += chain.size() + 1;
    for (std::size_t lv = chain.size(); lv-- > 0;) {
      Machine up = chain[lv];
      up.regs[up.remaining()[0].i] = t.intern(result);
      result = std::move(up);
    }
    return StepResult::to(std::move(result));
  }
}

struct RunOptions {
  bool detect_cycles = false;       // prove divergence early on repeated states
  std::uint64_t max_new_cells = 0;  // 0 = unlimited; exceeding reports Timeout
  std::uint64_t max_work = 0;       // 0 = unlimited; chain-visit budget, see step()
  std::function<void(std::uint64_t, const Machine&)> on_state;  // called per state
};

struct RunResult {
  enum class Status { Final, Error, Timeout };
  Status status = Status::Timeout;
  Machine machine;  // last state
  std::uint64_t steps = 0;
  bool cycle = false;
};

inline RunResult run(AddressTable& t, Machine m, std::uint64_t fuel, const RunOptions& opt = {}) {
  std::unordered_set<Address, AddressHash> seen;
  std::size_t base_cells = t.cell_count();
  std::uint64_t used = 0;
  std::uint64_t work = 0;
  for (;;) {
    if (opt.on_state) opt.on_state(used, m);
    if (opt.detect_cycles) {
      Address a = t.intern(m);
      if (!seen.insert(a).second) return RunResult{RunResult::Status::Timeout, std::move(m), used, true};
    }
    if (opt.max_new_cells && t.cell_count() - base_cells > opt.max_new_cells)
      return RunResult{RunResult::Status::Timeout, std::move(m), used, false};
    if (opt.max_work && work > opt.max_work)
      return RunResult{RunResult::Status::Timeout, std::move(m), used, false};
    StepResult sr = step(t, m, &work);
    if (sr.kind == StepResult::Kind::Final)
      return RunResult{RunResult::Status::Final, std::move(m), used, false};
    if (sr.kind == StepResult::Kind::Err)
      return RunResult{RunResult::Status::Error, std::move(m), used, false};
    if (used == fuel) return RunResult{RunResult::Status::Timeout, std::move(m), used, false};
    m = std::move(sr.next);
    ++used;
  }
}

struct ConvResult {
  bool related = false;
  bool fuel_exhausted = false;
};

// M <-> N iff they have a common reduct. Sound and complete up to fuel
// because the reduction is deterministic: it suffices to intersect the sets
// of states passed through. A shared err counts as a common reduct.
inline ConvResult interconvertible(AddressTable& t, const Address& a, const Address& b,
                                   std::uint64_t fuel) {
  if (a == b) return ConvResult{true, false};
  std::unordered_set<Address, AddressHash> states_a;
  bool err_a = false, fuel_a = false;
  {
    Machine m = t.lookup(a);
    states_a.insert(a);
    for (std::uint64_t used = 0;; ++used) {
      StepResult sr = step(t, m);
      if (sr.kind == StepResult::Kind::Final) break;
      if (sr.kind == StepResult::Kind::Err) {
        err_a = true;
        break;
      }
      if (used == fuel) {
        fuel_a = true;
        break;
      }
      m = std::move(sr.next);
      if (!states_a.insert(t.intern(m)).second) break;  // cycling: set complete
    }
  }
  if (states_a.count(b)) return ConvResult{true, false};
  bool err_b = false, fuel_b = false;
  {
    Machine m = t.lookup(b);
    std::unordered_set<Address, AddressHash> states_b;
    states_b.insert(b);
    for (std::uint64_t used = 0;; ++used) {
      StepResult sr = step(t, m);
      if (sr.kind == StepResult::Kind::Final) break;
      if (sr.kind == StepResult::Kind::Err) {
        err_b = true;
        break;
      }
      if (used == fuel) {
        fuel_b = true;
        break;
      }
      m = std::move(sr.next);
      Address s = t.intern(m);
      if (states_a.count(s)) return ConvResult{true, false};
      if (!states_b.insert(s).second) break;
    }
  }
  if (err_a && err_b) return ConvResult{true, false};
  return ConvResult{false, fuel_a || fuel_b};
}

}  // namespace eam
