#pragma once

// Machine dump format (bit-exact for golden tests):
//
//   machine <addr> { regs=[v0,...]; prog=INSTR(";"INSTR)*|"-"; tape=[a0,...] }
//
// addresses: num:N | fix:N | cell:N; uninitialized registers print as "_".
// A dump lists the root machine first, then every cell it transitively
// references in ascending id order. Cell ids are remapped on load, so dumps
// are portable across sessions.
//
// Trace line: step <k> | <instr or FINAL/ERR> | regs=[...] | tape=[...]

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eam/machine.hpp"
#include "eam/run.hpp"
#include "eam/table.hpp"
#include "eam/util.hpp"

namespace eam {

namespace detail {

inline std::string machine_body(const Machine& m) {
  std::string out = "{ regs=[";
  for (std::size_t i = 0; i < m.regs.size(); ++i) {
    if (i) out += ",";
    out += m.regs[i] ? show_address(*m.regs[i]) : "_";
  }
  out += "]; prog=";
  auto rem = m.remaining();
  if (rem.empty()) {
    out += "-";
  } else {
    for (std::size_t i = 0; i < rem.size(); ++i) {
      if (i) out += ";";
      out += show_instruction(rem[i]);
    }
  }
  out += "; tape=[";
  for (std::size_t i = 0; i < m.tape.size(); ++i) {
    if (i) out += ",";
    out += show_address(m.tape[i]);
  }
  out += "] }";
  return out;
}

inline void collect_cells(const AddressTable& t, const Address& a, std::set<std::uint64_t>& seen) {
  if (!a.is_cell() || seen.count(a.index)) return;
  seen.insert(a.index);
  const Machine& m = t.lookup(a);
  for (const auto& r : m.regs)
    if (r) collect_cells(t, *r, seen);
  for (const Address& x : m.tape) collect_cells(t, x, seen);
}

}  // namespace detail

inline std::string dump_machine_block(const Address& a, const Machine& m) {
  return "machine " + show_address(a) + " " + detail::machine_body(m);
}

inline std::string dump_machine(const AddressTable& t, const Address& root) {
  std::set<std::uint64_t> cells;
  detail::collect_cells(t, root, cells);
  if (root.is_cell()) cells.erase(root.index);
  std::string out = dump_machine_block(root, t.lookup(root));
  out += "\n";
  for (std::uint64_t id : cells) {
    out += dump_machine_block(Address::cell(id), t.lookup(Address::cell(id)));
    out += "\n";
  }
  return out;
}

namespace detail {

struct DumpBlock {
  Address addr;
  std::vector<std::string> regs;
  std::vector<std::string> instrs;
  std::vector<std::string> tape;
};

inline bool split_list(const std::string& s, std::vector<std::string>& out) {
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return true;
}

inline Result<Instruction, std::string> parse_instruction(const std::string& s) {
  std::istringstream in(s);
  std::string op;
  in >> op;
  auto want = [&](int n, Instruction ins) -> Result<Instruction, std::string> {
    std::vector<std::uint32_t> xs;
    std::uint32_t v;
    while (in >> v) xs.push_back(v);
    if (static_cast<int>(xs.size()) != n) return std::string("bad operand count in '" + s + "'");
    if (n >= 1) ins.i = xs[0];
    if (n >= 2) ins.j = xs[1];
    if (n >= 3) ins.k = xs[2];
    if (n >= 4) ins.l = xs[3];
    return ins;
  };
  if (op == "LOAD") return want(1, Instruction{Op::Load});
  if (op == "APP") return want(3, Instruction{Op::App});
  if (op == "TEST") return want(4, Instruction{Op::Test});
  if (op == "PRED") return want(2, Instruction{Op::Pred});
  if (op == "SUCC") return want(2, Instruction{Op::Succ});
  if (op == "CALL") return want(1, Instruction{Op::Call});
  return std::string("unknown instruction '" + op + "'");
}

inline Result<DumpBlock, std::string> parse_block(const std::string& line) {
  DumpBlock b;
  std::size_t p = line.find("machine ");
  if (p != 0) return std::string("expected 'machine <addr> { ... }'");
  std::size_t brace = line.find('{');
  if (brace == std::string::npos) return std::string("missing '{'");
  std::string addr_str = line.substr(8, brace - 8);
  while (!addr_str.empty() && addr_str.back() == ' ') addr_str.pop_back();
  auto addr = parse_address(addr_str);
  if (!addr) return std::string("bad address '" + addr_str + "'");
  b.addr = *addr;

  auto field = [&](const std::string& key) -> std::optional<std::string> {
    std::size_t at = line.find(key + "=");
    if (at == std::string::npos) return std::nullopt;
    return std::string(line.substr(at + key.size() + 1));
  };

  auto regs = field("regs");
  if (!regs) return std::string("missing field 'regs'");
  std::size_t close = regs->find(']');
  if (regs->empty() || (*regs)[0] != '[' || close == std::string::npos)
    return std::string("bad regs field");
  split_list(regs->substr(1, close - 1), b.regs);

  auto prog = field("prog");
  if (!prog) return std::string("missing field 'prog'");
  std::size_t end = prog->find("; tape=");
  if (end == std::string::npos) return std::string("bad prog field");
  std::string body = prog->substr(0, end);
  if (body != "-") {
    std::string cur;
    for (char c : body) {
      if (c == ';') {
        b.instrs.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) b.instrs.push_back(cur);
  }

  auto tape = field("tape");
  if (!tape) return std::string("missing field 'tape'");
  close = tape->find(']');
  if (tape->empty() || (*tape)[0] != '[' || close == std::string::npos)
    return std::string("bad tape field");
  split_list(tape->substr(1, close - 1), b.tape);
  return b;
}

}  // namespace detail

// Reads a dump produced by dump_machine, interning every block into t with
// remapped cell ids; returns the (new) root address.
inline Result<Address, std::string> load_dump(AddressTable& t, const std::string& text) {
  std::vector<detail::DumpBlock> blocks;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto b = detail::parse_block(line);
    if (!b.ok()) return b.error();
    blocks.push_back(b.value());
  }
  if (blocks.empty()) return std::string("empty dump");

  std::map<std::uint64_t, Address> remap;  // old cell id -> new address
  auto resolve = [&](const std::string& s) -> Result<Address, std::string> {
    auto a = parse_address(s);
    if (!a) return std::string("bad address '" + s + "'");
    if (!a->is_cell()) return *a;
    auto it = remap.find(a->index);
    if (it == remap.end())
      return std::string("dump references cell:" + std::to_string(a->index) + " before defining it");
    return it->second;
  };

  auto intern_block = [&](const detail::DumpBlock& b) -> Result<Address, std::string> {
    std::vector<std::optional<Address>> regs;
    for (const std::string& r : b.regs) {
      if (r == "_") {
        regs.push_back(std::nullopt);
        continue;
      }
      auto a = resolve(r);
      if (!a.ok()) return a;
      regs.push_back(a.value());
    }
    std::vector<Instruction> instrs;
    for (const std::string& s : b.instrs) {
      auto ins = detail::parse_instruction(s);
      if (!ins.ok()) return ins.error();
      instrs.push_back(ins.value());
    }
    std::vector<Address> tape;
    for (const std::string& s : b.tape) {
      auto a = resolve(s);
      if (!a.ok()) return a;
      tape.push_back(a.value());
    }
    Machine m{std::move(regs), make_program(std::move(instrs)), 0, std::move(tape)};
    if (!validity(m.remaining(), m.regs))
      return std::string("machine " + show_address(b.addr) + " is not valid");
    return t.intern(m);
  };

  // non-root blocks in ascending old id order, root last
  std::vector<std::size_t> order;
  for (std::size_t i = 1; i < blocks.size(); ++i) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return blocks[x].addr < blocks[y].addr;
  });
  for (std::size_t i : order) {
    auto a = intern_block(blocks[i]);
    if (!a.ok()) return a;
    if (blocks[i].addr.is_cell()) remap.emplace(blocks[i].addr.index, a.value());
  }
  return intern_block(blocks[0]);
}

inline std::string trace_line(std::uint64_t k, const std::string& what, const Machine& m) {
  std::string out = "step " + std::to_string(k) + " | " + what + " | regs=[";
  for (std::size_t i = 0; i < m.regs.size(); ++i) {
    if (i) out += ",";
    out += m.regs[i] ? show_address(*m.regs[i]) : "_";
  }
  out += "] | tape=[";
  for (std::size_t i = 0; i < m.tape.size(); ++i) {
    if (i) out += ",";
    out += show_address(m.tape[i]);
  }
  out += "]";
  return out;
}

inline std::string trace_state_line(std::uint64_t k, const Machine& m) {
  auto rem = m.remaining();
  return trace_line(k, rem.empty() || is_stuck(m) ? "FINAL" : show_instruction(rem[0]), m);
}

}  // namespace eam
