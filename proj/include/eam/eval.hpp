#pragma once

// Big-step evaluators with explicit fuel. Both use an explicit control stack,
// so fuel is not limited by C++ stack depth. Fuel is decremented once per
// rule application (one per term dispatch); literal numerals are recognized
// in one step.

#include <cstdint>
#include <string>
#include <vector>

#include "eam/syntax.hpp"

namespace eam {

struct Outcome {
  enum class Kind { Value, Timeout, Fault };
  Kind kind = Kind::Timeout;
  EValue value;
  std::string fault;

  bool is_value() const { return kind == Kind::Value; }
  bool is_timeout() const { return kind == Kind::Timeout; }
  bool is_fault() const { return kind == Kind::Fault; }

  static Outcome val(EValue v) { return Outcome{Kind::Value, std::move(v), {}}; }
  static Outcome timeout() { return Outcome{Kind::Timeout, {}, {}}; }
  static Outcome faulted(std::string msg) { return Outcome{Kind::Fault, {}, std::move(msg)}; }
};

// ---- EPCF: sigma |> t ----------------------------------------------------

inline Outcome eval_epcf(SubstPtr sigma, TermPtr t, std::uint64_t fuel) {
  enum class FrameKind { AppArg, PredK, SuccK, IfzK };
  struct Frame {
    FrameKind kind;
    SubstPtr subst;
    TermPtr a, b;
  };
  std::vector<Frame> stack;
  EValue val;
  bool returning = false;

  for (;;) {
    if (!returning) {
      if (fuel == 0) return Outcome::timeout();
      --fuel;
      if (auto n = numeral_of(t)) {  // (nat), takes precedence over (sc)
        val = EValue::num(*n);
        returning = true;
        continue;
      }
      switch (t->kind) {
        case TermKind::Variable: {  // (var)
          const Closure* c = subst_lookup(sigma, t->var.uid);
          if (!c) return Outcome::faulted("unbound variable '" + t->var.name + "'");
          Closure bound = *c;  // keep alive: c points into the list sigma owns
          sigma = std::move(bound.subst);
          t = std::move(bound.term);
          continue;
        }
        case TermKind::Lambda: {  // (fun): value carries rho + sigma, uids refreshed
          OpenedAbstraction o = open_abstraction(t->var, t->subst, t->child0);
          val = EValue::abs(std::move(o.binder), subst_concat(o.subst, sigma), std::move(o.body));
          returning = true;
          continue;
        }
        case TermKind::Apply:  // (beta_v), first premise
          stack.push_back(Frame{FrameKind::AppArg, sigma, t->child1, nullptr});
          t = t->child0;
          continue;
        case TermKind::Fix:  // (fix)
          t = mk_apply(t->child0, t);
          continue;
        case TermKind::Pred:  // (pr)/(pr0)
          stack.push_back(Frame{FrameKind::PredK, nullptr, nullptr, nullptr});
          t = t->child0;
          continue;
        case TermKind::Succ:  // (sc)
          stack.push_back(Frame{FrameKind::SuccK, nullptr, nullptr, nullptr});
          t = t->child0;
          continue;
        case TermKind::Ifz:  // (ifz0)/(ifz>0)
          stack.push_back(Frame{FrameKind::IfzK, sigma, t->child1, t->child2});
          t = t->child0;
          continue;
        case TermKind::Zero:
          val = EValue::num(0);  // covered by numeral_of, kept for completeness
          returning = true;
          continue;
      }
    } else {
      if (stack.empty()) return Outcome::val(std::move(val));
      Frame f = std::move(stack.back());
      stack.pop_back();
      switch (f.kind) {
        case FrameKind::AppArg: {
          if (val.is_numeral()) return Outcome::faulted("application of a numeral");
          sigma = subst_extend(val.subst, SubstBinding{val.binder, Closure{f.subst, f.a}});
          t = val.body;
          returning = false;
          continue;
        }
        case FrameKind::PredK: {
          if (!val.is_numeral()) return Outcome::faulted("pred of an abstraction");
          val = EValue::num(*val.numeral == 0 ? 0 : *val.numeral - 1);
          continue;
        }
        case FrameKind::SuccK: {
          if (!val.is_numeral()) return Outcome::faulted("succ of an abstraction");
          val = EValue::num(*val.numeral + 1);
          continue;
        }
        case FrameKind::IfzK: {
          if (!val.is_numeral()) return Outcome::faulted("ifz scrutinee is an abstraction");
          sigma = f.subst;
          t = *val.numeral == 0 ? f.a : f.b;
          returning = false;
          continue;
        }
      }
    }
  }
}

// ---- PCF: t || U ----------------------------------------------------------

inline Outcome eval_pcf(TermPtr t, std::uint64_t fuel) {
  enum class FrameKind { AppArg, PredK, SuccK, IfzK };
  struct Frame {
    FrameKind kind;
    TermPtr a, b;
  };
  std::vector<Frame> stack;
  EValue val;
  bool returning = false;

  for (;;) {
    if (!returning) {
      if (fuel == 0) return Outcome::timeout();
      --fuel;
      if (auto n = numeral_of(t)) {  // (val)
        val = EValue::num(*n);
        returning = true;
        continue;
      }
      switch (t->kind) {
        case TermKind::Lambda:  // (val)
          if (t->subst) return Outcome::faulted("not a PCF term: lambda carries a substitution");
          val = EValue::abs(t->var, nullptr, t->child0);
          returning = true;
          continue;
        case TermKind::Variable:
          return Outcome::faulted("unbound variable '" + t->var.name + "'");
        case TermKind::Apply:  // (beta_v)
          stack.push_back(Frame{FrameKind::AppArg, t->child1, nullptr});
          t = t->child0;
          continue;
        case TermKind::Fix:  // (fix)
          t = mk_apply(t->child0, t);
          continue;
        case TermKind::Pred:
          stack.push_back(Frame{FrameKind::PredK, nullptr, nullptr});
          t = t->child0;
          continue;
        case TermKind::Succ:
          stack.push_back(Frame{FrameKind::SuccK, nullptr, nullptr});
          t = t->child0;
          continue;
        case TermKind::Ifz:
          stack.push_back(Frame{FrameKind::IfzK, t->child1, t->child2});
          t = t->child0;
          continue;
        case TermKind::Zero:
          val = EValue::num(0);
          returning = true;
          continue;
      }
    } else {
      if (stack.empty()) return Outcome::val(std::move(val));
      Frame f = std::move(stack.back());
      stack.pop_back();
      switch (f.kind) {
        case FrameKind::AppArg: {
          if (val.is_numeral()) return Outcome::faulted("application of a numeral");
          t = substitute(val.body, val.binder, f.a);
          returning = false;
          continue;
        }
        case FrameKind::PredK: {
          if (!val.is_numeral()) return Outcome::faulted("pred of an abstraction");
          val = EValue::num(*val.numeral == 0 ? 0 : *val.numeral - 1);
          continue;
        }
        case FrameKind::SuccK: {
          if (!val.is_numeral()) return Outcome::faulted("succ of an abstraction");
          val = EValue::num(*val.numeral + 1);
          continue;
        }
        case FrameKind::IfzK: {
          if (!val.is_numeral()) return Outcome::faulted("ifz scrutinee is an abstraction");
          t = *val.numeral == 0 ? f.a : f.b;
          returning = false;
          continue;
        }
      }
    }
  }
}

}  // namespace eam
