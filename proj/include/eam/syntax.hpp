#pragma once

// EPCF abstract syntax: terms, explicit substitutions, closures and values.
// PCF is the fragment in which every lambda carries the empty substitution.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "eam/util.hpp"

namespace eam {

struct Var {
  std::string name;     // display only
  std::uint64_t uid{};  // binder identity
};

inline bool operator==(const Var& a, const Var& b) { return a.uid == b.uid; }

inline std::uint64_t fresh_uid() {
  static std::atomic<std::uint64_t> next{1};
  return next.fetch_add(1, std::memory_order_relaxed);
}

inline Var fresh_var(std::string name) { return Var{std::move(name), fresh_uid()}; }

struct Term;
using TermPtr = std::shared_ptr<const Term>;
struct SubstNode;
using SubstPtr = std::shared_ptr<const SubstNode>;

struct Closure {
  SubstPtr subst;  // null = empty substitution
  TermPtr term;
};

struct SubstBinding {
  Var var;
  Closure closure;
};

// Stored last-binding-first: extension and the peel used by flattening and
// by the machine translation are O(1) at the head.
struct SubstNode {
  SubstBinding binding;
  SubstPtr tail;
};

enum class TermKind { Variable, Apply, Lambda, Zero, Pred, Succ, Ifz, Fix };

struct Term {
  TermKind kind;
  Var var;         // Variable, Lambda binder
  SubstPtr subst;  // Lambda only
  TermPtr child0, child1, child2;
};

// ---- constructors ----------------------------------------------------------

inline TermPtr mk_variable(Var v) {
  return std::make_shared<Term>(Term{TermKind::Variable, std::move(v), nullptr, nullptr, nullptr, nullptr});
}
inline TermPtr mk_zero() {
  static const TermPtr z =
      std::make_shared<Term>(Term{TermKind::Zero, {}, nullptr, nullptr, nullptr, nullptr});
  return z;
}
inline TermPtr mk_lambda(Var binder, SubstPtr s, TermPtr body) {
  return std::make_shared<Term>(
      Term{TermKind::Lambda, std::move(binder), std::move(s), std::move(body), nullptr, nullptr});
}
inline TermPtr mk_apply(TermPtr f, TermPtr a) {
  return std::make_shared<Term>(Term{TermKind::Apply, {}, nullptr, std::move(f), std::move(a), nullptr});
}
inline TermPtr mk_pred(TermPtr m) {
  return std::make_shared<Term>(Term{TermKind::Pred, {}, nullptr, std::move(m), nullptr, nullptr});
}
inline TermPtr mk_succ(TermPtr m) {
  return std::make_shared<Term>(Term{TermKind::Succ, {}, nullptr, std::move(m), nullptr, nullptr});
}
inline TermPtr mk_ifz(TermPtr l, TermPtr m, TermPtr n) {
  return std::make_shared<Term>(Term{TermKind::Ifz, {}, nullptr, std::move(l), std::move(m), std::move(n)});
}
inline TermPtr mk_fix(TermPtr m) {
  return std::make_shared<Term>(Term{TermKind::Fix, {}, nullptr, std::move(m), nullptr, nullptr});
}

// n as succ^n(0)
inline TermPtr mk_numeral(std::uint64_t n) {
  TermPtr t = mk_zero();
  for (std::uint64_t i = 0; i < n; ++i) t = mk_succ(t);
  return t;
}

// ---- substitution lists ----------------------------------------------------

// s + [b]  (b becomes the last binding)
inline SubstPtr subst_extend(SubstPtr s, SubstBinding b) {
  return std::make_shared<SubstNode>(SubstNode{std::move(b), std::move(s)});
}

// sigma + rho; assumes disjoint domains. Shares sigma, rebuilds rho's spine.
inline SubstPtr subst_concat(const SubstPtr& sigma, const SubstPtr& rho) {
  if (!sigma) return rho;
  if (!rho) return sigma;
  std::vector<const SubstBinding*> rbs;
  for (const SubstNode* p = rho.get(); p; p = p->tail.get()) rbs.push_back(&p->binding);
  SubstPtr out = sigma;
  for (auto it = rbs.rbegin(); it != rbs.rend(); ++it)
    out = std::make_shared<SubstNode>(SubstNode{**it, std::move(out)});
  return out;
}

inline const Closure* subst_lookup(const SubstPtr& s, std::uint64_t uid) {
  for (const SubstNode* n = s.get(); n; n = n->tail.get())
    if (n->binding.var.uid == uid) return &n->binding.closure;
  return nullptr;
}

inline std::size_t subst_length(const SubstPtr& s) {
  std::size_t n = 0;
  for (const SubstNode* p = s.get(); p; p = p->tail.get()) ++n;
  return n;
}

// first binding first
inline std::vector<const SubstBinding*> subst_bindings(const SubstPtr& s) {
  std::vector<const SubstBinding*> out;
  for (const SubstNode* p = s.get(); p; p = p->tail.get()) out.push_back(&p->binding);
  std::reverse(out.begin(), out.end());
  return out;
}

inline bool subst_domain_contains(const SubstPtr& s, std::uint64_t uid) {
  return subst_lookup(s, uid) != nullptr;
}

inline bool subst_domains_disjoint(const SubstPtr& a, const SubstPtr& b) {
  for (const SubstNode* p = a.get(); p; p = p->tail.get())
    if (subst_domain_contains(b, p->binding.var.uid)) return false;
  return true;
}

// ---- size ------------------------------------------------------------------

inline std::uint64_t term_size(const TermPtr& t);

inline std::uint64_t subst_size(const SubstPtr& s) {
  std::uint64_t n = 0;
  for (const SubstNode* p = s.get(); p; p = p->tail.get())
    n += subst_size(p->binding.closure.subst) + term_size(p->binding.closure.term);
  return n;
}

inline std::uint64_t closure_size(const Closure& c) {
  return subst_size(c.subst) + term_size(c.term);
}

inline std::uint64_t term_size(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Variable:
    case TermKind::Zero:
      return 1;
    case TermKind::Apply:
      return term_size(t->child0) + term_size(t->child1) + 1;
    case TermKind::Lambda:
      return subst_size(t->subst) + term_size(t->child0) + 1;
    case TermKind::Pred:
    case TermKind::Succ:
    case TermKind::Fix:
      return term_size(t->child0) + 1;
    case TermKind::Ifz:
      return term_size(t->child0) + term_size(t->child1) + term_size(t->child2) + 1;
  }
  return 0;
}

// ---- basic predicates ------------------------------------------------------

// FV(\x.M[s]) = FV(M) - ({x} u dom(s)); closure contents are not counted.
inline void free_vars_into(const TermPtr& t, std::map<std::uint64_t, Var>& acc) {
  switch (t->kind) {
    case TermKind::Variable:
      acc.emplace(t->var.uid, t->var);
      return;
    case TermKind::Zero:
      return;
    case TermKind::Apply:
      free_vars_into(t->child0, acc);
      free_vars_into(t->child1, acc);
      return;
    case TermKind::Lambda: {
      std::map<std::uint64_t, Var> inner;
      free_vars_into(t->child0, inner);
      inner.erase(t->var.uid);
      for (const SubstNode* p = t->subst.get(); p; p = p->tail.get())
        inner.erase(p->binding.var.uid);
      acc.insert(inner.begin(), inner.end());
      return;
    }
    case TermKind::Pred:
    case TermKind::Succ:
    case TermKind::Fix:
      free_vars_into(t->child0, acc);
      return;
    case TermKind::Ifz:
      free_vars_into(t->child0, acc);
      free_vars_into(t->child1, acc);
      free_vars_into(t->child2, acc);
      return;
  }
}

inline std::map<std::uint64_t, Var> free_vars(const TermPtr& t) {
  std::map<std::uint64_t, Var> acc;
  free_vars_into(t, acc);
  return acc;
}

inline bool is_closed(const TermPtr& t) { return free_vars(t).empty(); }

// n iff t is literally succ^n(0)
inline std::optional<std::uint64_t> numeral_of(const TermPtr& t) {
  std::uint64_t n = 0;
  const Term* p = t.get();
  while (p->kind == TermKind::Succ) {
    ++n;
    p = p->child0.get();
  }
  if (p->kind == TermKind::Zero) return n;
  return std::nullopt;
}

inline bool is_pcf(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Variable:
    case TermKind::Zero:
      return true;
    case TermKind::Apply:
      return is_pcf(t->child0) && is_pcf(t->child1);
    case TermKind::Lambda:
      return t->subst == nullptr && is_pcf(t->child0);
    case TermKind::Pred:
    case TermKind::Succ:
    case TermKind::Fix:
      return is_pcf(t->child0);
    case TermKind::Ifz:
      return is_pcf(t->child0) && is_pcf(t->child1) && is_pcf(t->child2);
  }
  return false;
}

// ---- alpha equivalence -----------------------------------------------------

namespace detail {

using UidMap = std::map<std::uint64_t, std::uint64_t>;

inline bool alpha_eq_rec(const TermPtr& a, const TermPtr& b, const UidMap& ab, const UidMap& ba);

// Compares two substitution lists positionally (head = last binding) and
// returns the maps extended with the paired domain variables.
inline bool alpha_eq_subst(const SubstPtr& sa, const SubstPtr& sb, UidMap& ab, UidMap& ba) {
  const SubstNode* pa = sa.get();
  const SubstNode* pb = sb.get();
  while (pa && pb) {
    const Closure& ca = pa->binding.closure;
    const Closure& cb = pb->binding.closure;
    UidMap cab = ab, cba = ba;  // closures do not see these domains
    if (!alpha_eq_subst(ca.subst, cb.subst, cab, cba)) return false;
    if (!alpha_eq_rec(ca.term, cb.term, cab, cba)) return false;
    ab[pa->binding.var.uid] = pb->binding.var.uid;
    ba[pb->binding.var.uid] = pa->binding.var.uid;
    pa = pa->tail.get();
    pb = pb->tail.get();
  }
  return !pa && !pb;
}

inline bool alpha_eq_rec(const TermPtr& a, const TermPtr& b, const UidMap& ab, const UidMap& ba) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Variable: {
      auto ia = ab.find(a->var.uid);
      auto ib = ba.find(b->var.uid);
      if (ia == ab.end() && ib == ba.end()) return a->var.uid == b->var.uid;
      if (ia == ab.end() || ib == ba.end()) return false;
      return ia->second == b->var.uid && ib->second == a->var.uid;
    }
    case TermKind::Zero:
      return true;
    case TermKind::Apply:
      return alpha_eq_rec(a->child0, b->child0, ab, ba) && alpha_eq_rec(a->child1, b->child1, ab, ba);
    case TermKind::Lambda: {
      UidMap eab = ab, eba = ba;
      if (!alpha_eq_subst(a->subst, b->subst, eab, eba)) return false;
      eab[a->var.uid] = b->var.uid;
      eba[b->var.uid] = a->var.uid;
      return alpha_eq_rec(a->child0, b->child0, eab, eba);
    }
    case TermKind::Pred:
    case TermKind::Succ:
    case TermKind::Fix:
      return alpha_eq_rec(a->child0, b->child0, ab, ba);
    case TermKind::Ifz:
      return alpha_eq_rec(a->child0, b->child0, ab, ba) &&
             alpha_eq_rec(a->child1, b->child1, ab, ba) &&
             alpha_eq_rec(a->child2, b->child2, ab, ba);
  }
  return false;
}

}  // namespace detail

inline bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  detail::UidMap ab, ba;
  return detail::alpha_eq_rec(a, b, ab, ba);
}

// ---- renaming and refreshing -----------------------------------------------

namespace detail {

// Renames free occurrences whose uid is in `ren`. Does not descend into
// closure terms: occurrences there are never bound by an enclosing binder
// (cf. the free-variable equation for abstractions).
inline TermPtr rename_occurrences(const TermPtr& t, const std::unordered_map<std::uint64_t, Var>& ren) {
  switch (t->kind) {
    case TermKind::Variable: {
      auto it = ren.find(t->var.uid);
      return it == ren.end() ? t : mk_variable(it->second);
    }
    case TermKind::Zero:
      return t;
    case TermKind::Apply:
      return mk_apply(rename_occurrences(t->child0, ren), rename_occurrences(t->child1, ren));
    case TermKind::Lambda:
      return mk_lambda(t->var, t->subst, rename_occurrences(t->child0, ren));
    case TermKind::Pred:
      return mk_pred(rename_occurrences(t->child0, ren));
    case TermKind::Succ:
      return mk_succ(rename_occurrences(t->child0, ren));
    case TermKind::Fix:
      return mk_fix(rename_occurrences(t->child0, ren));
    case TermKind::Ifz:
      return mk_ifz(rename_occurrences(t->child0, ren), rename_occurrences(t->child1, ren),
                    rename_occurrences(t->child2, ren));
  }
  return t;
}

inline TermPtr refresh_rec(const TermPtr& t, std::unordered_map<std::uint64_t, Var>& ren);

inline SubstPtr refresh_subst_rec(const SubstPtr& s, std::unordered_map<std::uint64_t, Var>& ren) {
  if (!s) return nullptr;
  SubstPtr tail = refresh_subst_rec(s->tail, ren);
  Var d = fresh_var(s->binding.var.name);
  ren[s->binding.var.uid] = d;
  Closure c;
  c.subst = refresh_subst_rec(s->binding.closure.subst, ren);
  c.term = refresh_rec(s->binding.closure.term, ren);
  return subst_extend(tail, SubstBinding{std::move(d), std::move(c)});
}

inline TermPtr refresh_rec(const TermPtr& t, std::unordered_map<std::uint64_t, Var>& ren) {
  switch (t->kind) {
    case TermKind::Variable: {
      auto it = ren.find(t->var.uid);
      return it == ren.end() ? t : mk_variable(it->second);
    }
    case TermKind::Zero:
      return t;
    case TermKind::Apply:
      return mk_apply(refresh_rec(t->child0, ren), refresh_rec(t->child1, ren));
    case TermKind::Lambda: {
      SubstPtr s = refresh_subst_rec(t->subst, ren);
      Var b = fresh_var(t->var.name);
      ren[t->var.uid] = b;
      return mk_lambda(std::move(b), std::move(s), refresh_rec(t->child0, ren));
    }
    case TermKind::Pred:
      return mk_pred(refresh_rec(t->child0, ren));
    case TermKind::Succ:
      return mk_succ(refresh_rec(t->child0, ren));
    case TermKind::Fix:
      return mk_fix(refresh_rec(t->child0, ren));
    case TermKind::Ifz:
      return mk_ifz(refresh_rec(t->child0, ren), refresh_rec(t->child1, ren),
                    refresh_rec(t->child2, ren));
  }
  return t;
}

}  // namespace detail

// Copy of t with every binder and substitution-domain uid made globally fresh.
inline TermPtr refresh_term(const TermPtr& t) {
  std::unordered_map<std::uint64_t, Var> ren;
  return detail::refresh_rec(t, ren);
}

struct OpenedAbstraction {
  Var binder;
  SubstPtr subst;
  TermPtr body;
};

// Freshens the binder and the domain of the carried substitution of an
// abstraction so that extending or merging its substitution cannot collide.
inline OpenedAbstraction open_abstraction(const Var& binder, const SubstPtr& s, const TermPtr& body) {
  std::unordered_map<std::uint64_t, Var> ren;
  Var b = fresh_var(binder.name);
  ren[binder.uid] = b;
  SubstPtr s2 = nullptr;
  {
    // rebuild in place, keeping closures shared
    std::vector<const SubstBinding*> bs = subst_bindings(s);
    for (const SubstBinding* sb : bs) {
      Var d = fresh_var(sb->var.name);
      ren[sb->var.uid] = d;
      s2 = subst_extend(std::move(s2), SubstBinding{std::move(d), sb->closure});
    }
  }
  return OpenedAbstraction{std::move(b), std::move(s2), detail::rename_occurrences(body, ren)};
}

// ---- capture-free substitution ---------------------------------------------

namespace detail {

inline TermPtr substitute_rec(const TermPtr& t, const Var& x, const TermPtr& arg);

inline SubstPtr substitute_subst(const SubstPtr& s, const Var& x, const TermPtr& arg) {
  if (!s) return nullptr;
  SubstPtr tail = substitute_subst(s->tail, x, arg);
  Closure c = s->binding.closure;
  c.subst = substitute_subst(c.subst, x, arg);
  if (!subst_domain_contains(s->binding.closure.subst, x.uid))
    c.term = substitute_rec(c.term, x, arg);
  return subst_extend(std::move(tail), SubstBinding{s->binding.var, std::move(c)});
}

inline TermPtr substitute_rec(const TermPtr& t, const Var& x, const TermPtr& arg) {
  switch (t->kind) {
    case TermKind::Variable:
      return t->var.uid == x.uid ? refresh_term(arg) : t;
    case TermKind::Zero:
      return t;
    case TermKind::Apply:
      return mk_apply(substitute_rec(t->child0, x, arg), substitute_rec(t->child1, x, arg));
    case TermKind::Lambda: {
      if (t->var.uid == x.uid || subst_domain_contains(t->subst, x.uid)) return t;
      return mk_lambda(t->var, substitute_subst(t->subst, x, arg), substitute_rec(t->child0, x, arg));
    }
    case TermKind::Pred:
      return mk_pred(substitute_rec(t->child0, x, arg));
    case TermKind::Succ:
      return mk_succ(substitute_rec(t->child0, x, arg));
    case TermKind::Fix:
      return mk_fix(substitute_rec(t->child0, x, arg));
    case TermKind::Ifz:
      return mk_ifz(substitute_rec(t->child0, x, arg), substitute_rec(t->child1, x, arg),
                    substitute_rec(t->child2, x, arg));
  }
  return t;
}

}  // namespace detail

// body[x := arg]; each inserted copy of arg gets fresh binder uids so the
// result keeps binder uids pairwise distinct.
inline TermPtr substitute(const TermPtr& body, const Var& x, const TermPtr& arg) {
  return detail::substitute_rec(body, x, arg);
}

// ---- flattening -------------------------------------------------------------

// (sigma, M)* : performs all explicit substitutions, producing a PCF term.
// Well-founded: every recursive call strictly decreases closure_size.
inline TermPtr flatten(const Closure& c) {
  const TermPtr& t = c.term;
  const SubstPtr& s = c.subst;
  switch (t->kind) {
    case TermKind::Variable: {
      if (const Closure* bound = subst_lookup(s, t->var.uid)) return flatten(*bound);
      return t;
    }
    case TermKind::Zero:
      return t;
    case TermKind::Lambda:
      return mk_lambda(t->var, nullptr, flatten(Closure{subst_concat(s, t->subst), t->child0}));
    case TermKind::Apply:
      return mk_apply(flatten(Closure{s, t->child0}), flatten(Closure{s, t->child1}));
    case TermKind::Pred:
      return mk_pred(flatten(Closure{s, t->child0}));
    case TermKind::Succ:
      return mk_succ(flatten(Closure{s, t->child0}));
    case TermKind::Fix:
      return mk_fix(flatten(Closure{s, t->child0}));
    case TermKind::Ifz:
      return mk_ifz(flatten(Closure{s, t->child0}), flatten(Closure{s, t->child1}),
                    flatten(Closure{s, t->child2}));
  }
  return t;
}

// (sigma, M) in P-dagger  iff  (sigma, M)* = P up to alpha.
inline bool in_dagger(const Closure& c, const TermPtr& p) { return alpha_eq(flatten(c), p); }

// ---- values ------------------------------------------------------------------

struct EValue {
  std::optional<std::uint64_t> numeral;
  Var binder;      // abstraction only
  SubstPtr subst;  // abstraction only (null for PCF values)
  TermPtr body;    // abstraction only

  bool is_numeral() const { return numeral.has_value(); }

  static EValue num(std::uint64_t n) {
    EValue v;
    v.numeral = n;
    return v;
  }
  static EValue abs(Var binder, SubstPtr subst, TermPtr body) {
    EValue v;
    v.binder = std::move(binder);
    v.subst = std::move(subst);
    v.body = std::move(body);
    return v;
  }
};

inline TermPtr evalue_term(const EValue& v) {
  if (v.is_numeral()) return mk_numeral(*v.numeral);
  return mk_lambda(v.binder, v.subst, v.body);
}

}  // namespace eam
