#pragma once

// Extended addressing machines: addresses, instructions, programs, register
// files, tapes, the validity relation, and the machine constructions used by
// the translation (numerals, fixpoint machines, auxiliaries).

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eam/util.hpp"

namespace eam {

struct Address {
  enum class Tag : std::uint8_t { Num = 0, Fix = 1, Cell = 2 };
  Tag tag = Tag::Num;
  std::uint64_t index = 0;

  static Address num(std::uint64_t n) { return Address{Tag::Num, n}; }
  static Address fix(std::uint64_t n) { return Address{Tag::Fix, n}; }
  static Address cell(std::uint64_t id) { return Address{Tag::Cell, id}; }

  bool is_num() const { return tag == Tag::Num; }
  bool is_fix() const { return tag == Tag::Fix; }
  bool is_cell() const { return tag == Tag::Cell; }
};

inline bool operator==(const Address& a, const Address& b) {
  return a.tag == b.tag && a.index == b.index;
}
inline bool operator!=(const Address& a, const Address& b) { return !(a == b); }
inline bool operator<(const Address& a, const Address& b) {
  if (a.tag != b.tag) return a.tag < b.tag;
  return a.index < b.index;
}

inline std::string show_address(const Address& a) {
  switch (a.tag) {
    case Address::Tag::Num: return "num:" + std::to_string(a.index);
    case Address::Tag::Fix: return "fix:" + std::to_string(a.index);
    case Address::Tag::Cell: return "cell:" + std::to_string(a.index);
  }
  return "?";
}

inline std::optional<Address> parse_address(const std::string& s) {
  auto num_after = [&](std::size_t at) -> std::optional<std::uint64_t> {
    if (at >= s.size()) return std::nullopt;
    std::uint64_t v = 0;
    for (std::size_t i = at; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      v = v * 10 + static_cast<std::uint64_t>(s[i] - '0');
    }
    return v;
  };
  if (s.rfind("num:", 0) == 0) {
    auto v = num_after(4);
    if (v) return Address::num(*v);
  } else if (s.rfind("fix:", 0) == 0) {
    auto v = num_after(4);
    if (v) return Address::fix(*v);
  } else if (s.rfind("cell:", 0) == 0) {
    auto v = num_after(5);
    if (v) return Address::cell(*v);
  }
  return std::nullopt;
}

enum class Op : std::uint8_t { Load, App, Test, Pred, Succ, Call };

struct Instruction {
  Op op;
  std::uint32_t i = 0, j = 0, k = 0, l = 0;

  static Instruction load(std::uint32_t i) { return Instruction{Op::Load, i, 0, 0, 0}; }
  static Instruction app(std::uint32_t i, std::uint32_t j, std::uint32_t k) {
    return Instruction{Op::App, i, j, k, 0};
  }
  static Instruction test(std::uint32_t i, std::uint32_t j, std::uint32_t k, std::uint32_t l) {
    return Instruction{Op::Test, i, j, k, l};
  }
  static Instruction pred(std::uint32_t i, std::uint32_t j) { return Instruction{Op::Pred, i, j, 0, 0}; }
  static Instruction succ(std::uint32_t i, std::uint32_t j) { return Instruction{Op::Succ, i, j, 0, 0}; }
  static Instruction call(std::uint32_t i) { return Instruction{Op::Call, i, 0, 0, 0}; }
};

inline bool operator==(const Instruction& a, const Instruction& b) {
  return a.op == b.op && a.i == b.i && a.j == b.j && a.k == b.k && a.l == b.l;
}

inline std::string show_instruction(const Instruction& ins) {
  switch (ins.op) {
    case Op::Load: return "LOAD " + std::to_string(ins.i);
    case Op::App:
      return "APP " + std::to_string(ins.i) + " " + std::to_string(ins.j) + " " + std::to_string(ins.k);
    case Op::Test:
      return "TEST " + std::to_string(ins.i) + " " + std::to_string(ins.j) + " " +
             std::to_string(ins.k) + " " + std::to_string(ins.l);
    case Op::Pred: return "PRED " + std::to_string(ins.i) + " " + std::to_string(ins.j);
    case Op::Succ: return "SUCC " + std::to_string(ins.i) + " " + std::to_string(ins.j);
    case Op::Call: return "CALL " + std::to_string(ins.i);
  }
  return "?";
}

using Program = std::shared_ptr<const std::vector<Instruction>>;

inline Program make_program(std::vector<Instruction> ins) {
  return std::make_shared<const std::vector<Instruction>>(std::move(ins));
}

struct Machine {
  std::vector<std::optional<Address>> regs;
  Program prog;
  std::uint32_t pc = 0;  // instructions before pc are consumed
  std::vector<Address> tape;

  std::span<const Instruction> remaining() const {
    if (!prog || pc >= prog->size()) return {};
    return std::span<const Instruction>(prog->data() + pc, prog->size() - pc);
  }
  std::size_t reg_count() const { return regs.size(); }
};

inline bool operator==(const Machine& a, const Machine& b) {
  if (a.regs != b.regs || a.tape != b.tape) return false;
  auto ra = a.remaining();
  auto rb = b.remaining();
  if (ra.size() != rb.size()) return false;
  for (std::size_t i = 0; i < ra.size(); ++i)
    if (!(ra[i] == rb[i])) return false;
  return true;
}

struct AddressHash {
  std::size_t operator()(const Address& a) const {
    std::size_t h = static_cast<std::size_t>(a.tag);
    hash_combine(h, std::hash<std::uint64_t>{}(a.index));
    return h;
  }
};

struct MachineHash {
  std::size_t operator()(const Machine& m) const {
    std::size_t h = 0x5ea3u;
    AddressHash ah;
    for (const auto& r : m.regs) {
      hash_combine(h, r ? ah(*r) : 0xdeadu);
    }
    for (const Instruction& ins : m.remaining()) {
      std::size_t x = static_cast<std::size_t>(ins.op);
      hash_combine(x, ins.i);
      hash_combine(x, ins.j);
      hash_combine(x, ins.k);
      hash_combine(x, ins.l);
      hash_combine(h, x);
    }
    for (const Address& a : m.tape) hash_combine(h, ah(a));
    return h;
  }
};

// ---- program shape and validity ---------------------------------------------

// P ::= Load;P | A ;  A ::= (App|Test|Pred|Succ);A | C ;  C ::= Call | eps
inline bool program_well_formed(std::span<const Instruction> p) {
  int phase = 0;  // 0: loads, 1: arithmetic, 2: after call
  for (const Instruction& ins : p) {
    if (phase == 2) return false;
    switch (ins.op) {
      case Op::Load:
        if (phase != 0) return false;
        break;
      case Op::App:
      case Op::Test:
      case Op::Pred:
      case Op::Succ:
        phase = 1;
        break;
      case Op::Call:
        phase = 2;
        break;
    }
  }
  return true;
}

// Decides I |=r P for I = initialized register indices < r: the program never
// reads an uninitialized register. Loads may target indices >= r (the write
// is a discard); every other write target must be < r.
inline bool validity(std::span<const Instruction> p, const std::vector<std::optional<Address>>& regs) {
  if (!program_well_formed(p)) return false;
  const std::size_t r = regs.size();
  std::vector<bool> init(r, false);
  for (std::size_t i = 0; i < r; ++i) init[i] = regs[i].has_value();
  auto readable = [&](std::uint32_t i) { return i < r && init[i]; };
  for (const Instruction& ins : p) {
    switch (ins.op) {
      case Op::Load:
        if (ins.i < r) init[ins.i] = true;
        break;
      case Op::App:
        if (!readable(ins.i) || !readable(ins.j) || ins.k >= r) return false;
        init[ins.k] = true;
        break;
      case Op::Test:
        if (!readable(ins.i) || !readable(ins.j) || !readable(ins.k) || ins.l >= r) return false;
        init[ins.l] = true;
        break;
      case Op::Pred:
      case Op::Succ:
        if (!readable(ins.i) || ins.j >= r) return false;
        init[ins.j] = true;
        break;
      case Op::Call:
        if (!readable(ins.i)) return false;
        break;
    }
  }
  return true;
}

inline Machine make_machine(std::vector<std::optional<Address>> regs, std::vector<Instruction> ins,
                            std::vector<Address> tape) {
  Machine m{std::move(regs), make_program(std::move(ins)), 0, std::move(tape)};
  if (!validity(m.remaining(), m.regs))
    throw std::invalid_argument("make_machine: program not valid w.r.t. registers");
  return m;
}

inline Machine append_tape(const Machine& m, std::span<const Address> extra) {
  Machine out = m;
  out.tape.insert(out.tape.end(), extra.begin(), extra.end());
  return out;
}

inline Machine append_tape(const Machine& m, std::initializer_list<Address> extra) {
  return append_tape(m, std::span<const Address>(extra.begin(), extra.size()));
}

// suspended on a Load with an empty tape
inline bool is_stuck(const Machine& m) {
  auto rem = m.remaining();
  return !rem.empty() && rem[0].op == Op::Load && m.tape.empty();
}

// ---- machine constructions ----------------------------------------------------

inline Machine numeral_machine(std::uint64_t n) {
  return Machine{{Address::num(n)}, make_program({}), 0, {}};
}

inline std::vector<Instruction> fix_program(std::uint64_t n) {
  std::vector<Instruction> p;
  for (std::uint64_t i = 1; i <= n + 1; ++i) p.push_back(Instruction::load(static_cast<std::uint32_t>(i)));
  for (std::uint64_t i = 1; i <= n + 1; ++i)
    p.push_back(Instruction::app(0, static_cast<std::uint32_t>(i), 0));
  for (std::uint64_t i = 2; i <= n + 1; ++i)
    p.push_back(Instruction::app(1, static_cast<std::uint32_t>(i), 1));
  p.push_back(Instruction::app(1, 0, 1));
  p.push_back(Instruction::call(1));
  return p;
}

// Y_n: holds its own address in R0; n+2 registers.
inline Machine fix_machine(std::uint64_t n) {
  std::vector<std::optional<Address>> regs(n + 2);
  regs[0] = Address::fix(n);
  return Machine{std::move(regs), make_program(fix_program(n)), 0, {}};
}

// Proj(n,i) . [d1..dn] ->> d_i   (1 <= i <= n)
inline Machine proj_machine(std::uint64_t n, std::uint64_t i) {
  if (n == 0 || i == 0 || i > n) throw std::invalid_argument("proj_machine: need 1 <= i <= n");
  std::vector<Instruction> p;
  for (std::uint64_t r = 0; r < n; ++r) p.push_back(Instruction::load(static_cast<std::uint32_t>(r)));
  p.push_back(Instruction::call(static_cast<std::uint32_t>(i - 1)));
  return Machine{std::vector<std::optional<Address>>(n), make_program(std::move(p)), 0, {}};
}

// Pred_n . [a,d1..dn] ->> <R0 = a.d1...dn, Pred 0 0; Call 0>
inline Machine pred_machine(std::uint64_t n) {
  std::vector<Instruction> p;
  for (std::uint64_t r = 0; r <= n; ++r) p.push_back(Instruction::load(static_cast<std::uint32_t>(r)));
  for (std::uint64_t r = 1; r <= n; ++r)
    p.push_back(Instruction::app(0, static_cast<std::uint32_t>(r), 0));
  p.push_back(Instruction::pred(0, 0));
  p.push_back(Instruction::call(0));
  return Machine{std::vector<std::optional<Address>>(n + 1), make_program(std::move(p)), 0, {}};
}

inline Machine succ_machine(std::uint64_t n) {
  std::vector<Instruction> p;
  for (std::uint64_t r = 0; r <= n; ++r) p.push_back(Instruction::load(static_cast<std::uint32_t>(r)));
  for (std::uint64_t r = 1; r <= n; ++r)
    p.push_back(Instruction::app(0, static_cast<std::uint32_t>(r), 0));
  p.push_back(Instruction::succ(0, 0));
  p.push_back(Instruction::call(0));
  return Machine{std::vector<std::optional<Address>>(n + 1), make_program(std::move(p)), 0, {}};
}

// App_n . [a,b,d1..dn] ->> lookup(a) . [d1..dn, b.d1...dn]
inline Machine app_machine(std::uint64_t n) {
  std::vector<Instruction> p;
  for (std::uint64_t r = 0; r <= n + 1; ++r) p.push_back(Instruction::load(static_cast<std::uint32_t>(r)));
  for (std::uint64_t r = 2; r <= n + 1; ++r)
    p.push_back(Instruction::app(1, static_cast<std::uint32_t>(r), 1));
  for (std::uint64_t r = 2; r <= n + 1; ++r)
    p.push_back(Instruction::app(0, static_cast<std::uint32_t>(r), 0));
  p.push_back(Instruction::app(0, 1, 0));
  p.push_back(Instruction::call(0));
  return Machine{std::vector<std::optional<Address>>(n + 2), make_program(std::move(p)), 0, {}};
}

// IfZ_n . [a,b,c,d1..dn] ->> <R0=a.d, R1=b.d, R2=c.d, Test 0 1 2 0; Call 0>
inline Machine ifz_machine(std::uint64_t n) {
  std::vector<Instruction> p;
  for (std::uint64_t r = 0; r <= n + 2; ++r) p.push_back(Instruction::load(static_cast<std::uint32_t>(r)));
  for (std::uint64_t r = 3; r <= n + 2; ++r)
    p.push_back(Instruction::app(0, static_cast<std::uint32_t>(r), 0));
  for (std::uint64_t r = 3; r <= n + 2; ++r)
    p.push_back(Instruction::app(1, static_cast<std::uint32_t>(r), 1));
  for (std::uint64_t r = 3; r <= n + 2; ++r)
    p.push_back(Instruction::app(2, static_cast<std::uint32_t>(r), 2));
  p.push_back(Instruction::test(0, 1, 2, 0));
  p.push_back(Instruction::call(0));
  return Machine{std::vector<std::optional<Address>>(n + 3), make_program(std::move(p)), 0, {}};
}

// ---- canonical shapes -----------------------------------------------------------

// <R0 = num:n, eps, []>
inline std::optional<std::uint64_t> numeral_shape(const Machine& m) {
  if (m.regs.size() != 1 || !m.regs[0] || !m.regs[0]->is_num()) return std::nullopt;
  if (!m.remaining().empty() || !m.tape.empty()) return std::nullopt;
  return m.regs[0]->index;
}

// The Y_n tuple with R0 = fix:n and the full, unconsumed program.
inline std::optional<std::uint64_t> fix_shape(const Machine& m) {
  if (m.regs.size() < 2 || !m.tape.empty()) return std::nullopt;
  std::uint64_t n = m.regs.size() - 2;
  if (!m.regs[0] || *m.regs[0] != Address::fix(n)) return std::nullopt;
  for (std::size_t i = 1; i < m.regs.size(); ++i)
    if (m.regs[i]) return std::nullopt;
  auto rem = m.remaining();
  std::vector<Instruction> want = fix_program(n);
  if (rem.size() != want.size()) return std::nullopt;
  for (std::size_t i = 0; i < want.size(); ++i)
    if (!(rem[i] == want[i])) return std::nullopt;
  return n;
}

}  // namespace eam
