#pragma once

// Machine-level typing. The existential type guesses of the paper-style rules
// are realized with unification variables; reserved numeral and fixpoint
// addresses are recognized first, every other machine peels its registers
// from the highest index down and then checks its program against its tape.
// Reports are memoized per address; each use site instantiates the stored
// principal type with fresh variables.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "eam/machine.hpp"
#include "eam/run.hpp"
#include "eam/table.hpp"
#include "eam/types.hpp"
#include "eam/unify.hpp"
#include "eam/util.hpp"

namespace eam {

struct MachineTypeReport {
  bool typed = false;
  ITypePtr principal;  // canonical; null when untypable
  enum class Reason { None, Clash, Cycle, Shape, GuardExhausted };
  Reason reason = Reason::None;
  std::vector<std::string> rule_trace;  // rules of this machine's own derivation

  static MachineTypeReport ok(ITypePtr t, std::vector<std::string> trace) {
    MachineTypeReport r;
    r.typed = true;
    r.principal = std::move(t);
    r.rule_trace = std::move(trace);
    return r;
  }
  static MachineTypeReport untypable(Reason why) {
    MachineTypeReport r;
    r.reason = why;
    return r;
  }
};

inline const char* show_untypable_reason(MachineTypeReport::Reason r) {
  switch (r) {
    case MachineTypeReport::Reason::None: return "none";
    case MachineTypeReport::Reason::Clash: return "clash";
    case MachineTypeReport::Reason::Cycle: return "cycle";
    case MachineTypeReport::Reason::Shape: return "shape";
    case MachineTypeReport::Reason::GuardExhausted: return "guard-exhausted";
  }
  return "?";
}

class MachineTyper {
 public:
  explicit MachineTyper(const AddressTable& table, std::uint64_t guard = 10000)
      : table_(table), guard_(guard) {}

  const MachineTypeReport& infer(const Address& a) {
    auto it = memo_.find(a);
    if (it != memo_.end()) return it->second;
    if (visiting_.empty()) visits_ = 0;
    MachineTypeReport rep = infer_uncached(a);
    if (rep.reason == MachineTypeReport::Reason::GuardExhausted) {
      // inconclusive answers are never memoized
      return scratch_ = std::move(rep);
    }
    return memo_.emplace(a, std::move(rep)).first->second;
  }

  enum class Check { Instance, NotInstance, Untypable };

  Check check(const Address& a, const TypePtr& ty) {
    const MachineTypeReport& rep = infer(a);
    if (!rep.typed) return Check::Untypable;
    return itype_is_instance(rep.principal, ty) ? Check::Instance : Check::NotInstance;
  }

 private:
  MachineTypeReport infer_uncached(const Address& a) {
    if (a.is_num()) return MachineTypeReport::ok(itype_int(), {"nat"});

    if (a.is_fix()) {
      // (delta_1 -> ... -> delta_n -> alpha -> alpha) -> delta_1 -> ... -> delta_n -> alpha
      std::uint64_t n = a.index;
      std::vector<ITypePtr> deltas;
      for (std::uint64_t i = 0; i < n; ++i) deltas.push_back(itype_var(static_cast<std::int64_t>(i)));
      ITypePtr alpha = itype_var(static_cast<std::int64_t>(n));
      ITypePtr fun = itype_arrow_chain(deltas, itype_arrow(alpha, alpha));
      ITypePtr whole = itype_arrow(fun, itype_arrow_chain(deltas, alpha));
      return MachineTypeReport::ok(std::move(whole), {"fix_" + std::to_string(n)});
    }

    if (visiting_.count(a)) return MachineTypeReport::untypable(MachineTypeReport::Reason::Cycle);
    if (++visits_ > guard_)
      return MachineTypeReport::untypable(MachineTypeReport::Reason::GuardExhausted);
    visiting_.insert(a);
    MachineTypeReport rep = infer_cell(a);
    visiting_.erase(a);
    return rep;
  }

  // a recursively typed reference, instantiated into u
  bool typed_ref(const Address& a, Unifier& u, ITypePtr& out, MachineTypeReport::Reason& why) {
    const MachineTypeReport& rep = infer(a);
    if (!rep.typed) {
      why = rep.reason;
      return false;
    }
    out = instantiate(rep.principal, u);
    return true;
  }

  MachineTypeReport infer_cell(const Address& a) {
    const Machine& m = table_.lookup(a);
    Unifier u;
    std::vector<std::string> trace;
    std::unordered_map<std::uint32_t, ITypePtr> delta;
    MachineTypeReport::Reason why = MachineTypeReport::Reason::None;

    // peel registers from the last one down
    for (std::size_t idx = m.regs.size(); idx-- > 0;) {
      if (!m.regs[idx]) {
        trace.push_back("R_null");
        continue;
      }
      ITypePtr ty;
      if (!typed_ref(*m.regs[idx], u, ty, why)) return MachineTypeReport::untypable(why);
      delta.emplace(static_cast<std::uint32_t>(idx), std::move(ty));
      trace.push_back("R_typed");
    }
    trace.push_back("R_()");

    auto reg_type = [&](std::uint32_t i) -> ITypePtr {
      auto it = delta.find(i);
      return it == delta.end() ? nullptr : it->second;
    };

    std::vector<ITypePtr> loads_pending;  // loads past the end of the tape
    std::size_t tpos = 0;
    bool called = false;
    ITypePtr core;

    auto rem = m.remaining();
    for (const Instruction& ins : rem) {
      switch (ins.op) {
        case Op::Load: {
          if (tpos < m.tape.size()) {
            ITypePtr ty;
            if (!typed_ref(m.tape[tpos], u, ty, why)) return MachineTypeReport::untypable(why);
            ++tpos;
            delta[ins.i] = std::move(ty);
            trace.push_back("load_typed");
          } else {
            ITypePtr beta = u.fresh();
            loads_pending.push_back(beta);
            delta[ins.i] = std::move(beta);
            trace.push_back("load_null");
          }
          break;
        }
        case Op::Pred:
        case Op::Succ: {
          ITypePtr src = reg_type(ins.i);
          if (!src) return MachineTypeReport::untypable(MachineTypeReport::Reason::Shape);
          if (!u.unify(src, itype_int()))
            return MachineTypeReport::untypable(MachineTypeReport::Reason::Clash);
          delta[ins.j] = itype_int();
          trace.push_back(ins.op == Op::Pred ? "pred" : "succ");
          break;
        }
        case Op::Test: {
          ITypePtr scrut = reg_type(ins.i);
          ITypePtr lhs = reg_type(ins.j);
          ITypePtr rhs = reg_type(ins.k);
          if (!scrut || !lhs || !rhs)
            return MachineTypeReport::untypable(MachineTypeReport::Reason::Shape);
          if (!u.unify(scrut, itype_int()) || !u.unify(lhs, rhs))
            return MachineTypeReport::untypable(MachineTypeReport::Reason::Clash);
          delta[ins.l] = lhs;
          trace.push_back("test");
          break;
        }
        case Op::App: {
          ITypePtr fn = reg_type(ins.i);
          ITypePtr arg = reg_type(ins.j);
          if (!fn || !arg) return MachineTypeReport::untypable(MachineTypeReport::Reason::Shape);
          ITypePtr res = u.fresh();
          if (!u.unify(fn, itype_arrow(arg, res)))
            return MachineTypeReport::untypable(MachineTypeReport::Reason::Clash);
          delta[ins.k] = std::move(res);
          trace.push_back("app");
          break;
        }
        case Op::Call: {
          ITypePtr fn = reg_type(ins.i);
          if (!fn) return MachineTypeReport::untypable(MachineTypeReport::Reason::Shape);
          std::vector<ITypePtr> args;
          for (std::size_t p = tpos; p < m.tape.size(); ++p) {
            ITypePtr ty;
            if (!typed_ref(m.tape[p], u, ty, why)) return MachineTypeReport::untypable(why);
            args.push_back(std::move(ty));
          }
          ITypePtr res = u.fresh();
          if (!u.unify(fn, itype_arrow_chain(args, res)))
            return MachineTypeReport::untypable(MachineTypeReport::Reason::Clash);
          core = std::move(res);
          called = true;
          trace.push_back("call");
          break;
        }
      }
    }

    // no rule types a machine whose program ends without Call
    if (!called) return MachineTypeReport::untypable(MachineTypeReport::Reason::Shape);

    ITypePtr whole = core;
    for (auto it = loads_pending.rbegin(); it != loads_pending.rend(); ++it)
      whole = itype_arrow(*it, whole);
    return MachineTypeReport::ok(canonicalize(u.resolve(whole)), std::move(trace));
  }

  const AddressTable& table_;
  std::uint64_t guard_;
  std::uint64_t visits_ = 0;
  std::unordered_map<Address, MachineTypeReport, AddressHash> memo_;
  std::unordered_set<Address, AddressHash> visiting_;
  MachineTypeReport scratch_;
};

// Types a tape extension: unifies fTy with argTy -> fresh and returns the
// codomain. fTy and argTy are canonical principal types.
inline Result<ITypePtr, std::string> application_typing(const ITypePtr& f_ty, const ITypePtr& arg_ty) {
  Unifier u;
  ITypePtr f = instantiate(f_ty, u);
  ITypePtr x = instantiate(arg_ty, u);
  ITypePtr b = u.fresh();
  if (!u.unify(f, itype_arrow(x, b)))
    return std::string("clash: cannot apply " + show_itype(f_ty) + " to " + show_itype(arg_ty));
  return canonicalize(u.resolve(b));
}

}  // namespace eam
