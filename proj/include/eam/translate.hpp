#pragma once

// Translation of EPCF closures to machine addresses. Recursion is on the
// size of the closure. The binding case peels the last binding and prepends
// its variable to the frame; binding closures are translated in the empty
// frame (they are closed under their own substitutions). A literal numeral
// takes precedence over the successor case.

#include <stdexcept>
#include <string>
#include <vector>

#include "eam/syntax.hpp"
#include "eam/table.hpp"

namespace eam {

using VarFrame = std::vector<Var>;

inline Address translate(AddressTable& t, const Closure& c, const VarFrame& frame) {
  if (c.subst) {
    // [| sigma + [y <- (tau, N)], M |]_xs = [| sigma, M |]_{y,xs} . [#[| tau, N |]]
    const SubstBinding& b = c.subst->binding;
    VarFrame extended;
    extended.reserve(frame.size() + 1);
    extended.push_back(b.var);
    extended.insert(extended.end(), frame.begin(), frame.end());
    Address fun = translate(t, Closure{c.subst->tail, c.term}, extended);
    Address arg = translate(t, b.closure, {});
    return t.apply(fun, arg);
  }

  const TermPtr& m = c.term;
  const std::uint64_t n = frame.size();

  if (auto k = numeral_of(m)) {  // [| k |]_xs = Proj(n+1,1) . [k]
    Address p = t.intern(proj_machine(n + 1, 1));
    return t.apply(p, Address::num(*k));
  }

  switch (m->kind) {
    case TermKind::Variable: {
      for (std::size_t i = 0; i < frame.size(); ++i)
        if (frame[i].uid == m->var.uid) return t.intern(proj_machine(n, i + 1));
      throw std::invalid_argument("translate: free variable '" + m->var.name +
                                  "' not covered by substitution or frame");
    }
    case TermKind::Lambda:  // [| \y.M[sigma] |]_xs = [| sigma, M |]_{xs,y}
    {
      VarFrame extended = frame;
      extended.push_back(m->var);
      return translate(t, Closure{m->subst, m->child0}, extended);
    }
    case TermKind::Apply: {
      Address fn = translate(t, Closure{nullptr, m->child0}, frame);
      Address arg = translate(t, Closure{nullptr, m->child1}, frame);
      return t.apply(t.apply(t.intern(app_machine(n)), fn), arg);
    }
    case TermKind::Pred:
      return t.apply(t.intern(pred_machine(n)), translate(t, Closure{nullptr, m->child0}, frame));
    case TermKind::Succ:
      return t.apply(t.intern(succ_machine(n)), translate(t, Closure{nullptr, m->child0}, frame));
    case TermKind::Ifz: {
      Address l = translate(t, Closure{nullptr, m->child0}, frame);
      Address a = translate(t, Closure{nullptr, m->child1}, frame);
      Address b = translate(t, Closure{nullptr, m->child2}, frame);
      return t.apply(t.apply(t.apply(t.intern(ifz_machine(n)), l), a), b);
    }
    case TermKind::Fix:
      return t.apply(Address::fix(n), translate(t, Closure{nullptr, m->child0}, frame));
    case TermKind::Zero:
      break;  // handled by the numeral case
  }
  throw std::logic_error("translate: unreachable");
}

inline Address compile_program(AddressTable& t, const TermPtr& p) {
  if (!is_closed(p)) throw std::invalid_argument("compile_program: term is not closed");
  return translate(t, Closure{nullptr, p}, {});
}

}  // namespace eam
