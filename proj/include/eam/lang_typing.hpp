#pragma once

// Type assignment for EPCF and PCF via unification.
//
// The abstraction rule synthesizes a context from the carried substitution;
// each closure body is typed only under the context derived from its own
// substitution, so closures must be closed up to their own domains.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eam/syntax.hpp"
#include "eam/types.hpp"
#include "eam/unify.hpp"
#include "eam/util.hpp"

namespace eam {

struct TypeError {
  TermPtr at;
  std::string message;
  ITypePtr left, right;  // set on unification clashes
};

// ordered map Var -> SimpleType for the ambient context
using TypeEnv = std::vector<std::pair<Var, TypePtr>>;

namespace detail {

class LangTyper {
 public:
  LangTyper(bool pcf_only) : pcf_only_(pcf_only) {}

  Unifier& unifier() { return u_; }

  void push_env(const TypeEnv& env) {
    for (const auto& [v, ty] : env) scope_.emplace_back(v.uid, itype_from_simple(ty));
  }

  Result<ITypePtr, TypeError> infer(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::Variable: {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
          if (it->first == t->var.uid) return it->second;
        return TypeError{t, "unbound variable '" + t->var.name + "'", nullptr, nullptr};
      }
      case TermKind::Zero:
        return itype_int();
      case TermKind::Succ:
      case TermKind::Pred: {
        auto m = infer(t->child0);
        if (!m.ok()) return m;
        if (!u_.unify(m.value(), itype_int())) return clash(t, m.value(), itype_int());
        return itype_int();
      }
      case TermKind::Ifz: {
        auto l = infer(t->child0);
        if (!l.ok()) return l;
        if (!u_.unify(l.value(), itype_int())) return clash(t, l.value(), itype_int());
        auto m = infer(t->child1);
        if (!m.ok()) return m;
        auto n = infer(t->child2);
        if (!n.ok()) return n;
        if (!u_.unify(m.value(), n.value())) return clash(t, m.value(), n.value());
        return m;
      }
      case TermKind::Fix: {
        auto m = infer(t->child0);
        if (!m.ok()) return m;
        ITypePtr a = u_.fresh();
        if (!u_.unify(m.value(), itype_arrow(a, a)))
          return clash(t, m.value(), itype_arrow(a, a));
        return a;
      }
      case TermKind::Apply: {
        auto f = infer(t->child0);
        if (!f.ok()) return f;
        auto x = infer(t->child1);
        if (!x.ok()) return x;
        ITypePtr b = u_.fresh();
        if (!u_.unify(f.value(), itype_arrow(x.value(), b)))
          return clash(t, f.value(), itype_arrow(x.value(), b));
        return b;
      }
      case TermKind::Lambda: {
        if (pcf_only_ && t->subst)
          return TypeError{t, "not a PCF term: lambda carries a substitution", nullptr, nullptr};
        std::size_t mark = scope_.size();
        if (t->subst) {
          auto delta = subst_env(t->subst);
          if (!delta.ok()) return delta.error();
          for (const auto& [v, ty] : delta.value()) scope_.emplace_back(v.uid, ty);
        }
        ITypePtr a = u_.fresh();
        scope_.emplace_back(t->var.uid, a);
        auto body = infer(t->child0);
        scope_.resize(mark);
        if (!body.ok()) return body;
        return itype_arrow(a, body.value());
      }
    }
    return TypeError{t, "malformed term", nullptr, nullptr};
  }

  // Delta with each domain variable mapped to the type of its closure, in
  // binding order. Each closure body is typed only under its own context.
  Result<std::vector<std::pair<Var, ITypePtr>>, TypeError> subst_env(const SubstPtr& s) {
    std::vector<std::pair<Var, ITypePtr>> delta;
    for (const SubstBinding* b : subst_bindings(s)) {
      auto inner = subst_env(b->closure.subst);
      if (!inner.ok()) return inner;
      std::vector<std::pair<std::uint64_t, ITypePtr>> saved;
      saved.swap(scope_);
      for (const auto& [v, ty] : inner.value()) scope_.emplace_back(v.uid, ty);
      auto ty = infer(b->closure.term);
      scope_.swap(saved);
      if (!ty.ok()) {
        TypeError e = ty.error();
        if (e.message.rfind("unbound", 0) == 0)
          e.message = "closure body has a free variable outside its substitution domain: " +
                      e.message;
        return e;
      }
      delta.emplace_back(b->var, ty.value());
    }
    return delta;
  }

 private:
  TypeError clash(const TermPtr& at, const ITypePtr& a, const ITypePtr& b) {
    ITypePtr ra = u_.resolve(a);
    ITypePtr rb = u_.resolve(b);
    return TypeError{at, "cannot unify " + show_itype(ra) + " with " + show_itype(rb), ra, rb};
  }

  Unifier u_;
  std::vector<std::pair<std::uint64_t, ITypePtr>> scope_;
  bool pcf_only_;
};

}  // namespace detail

// Principal simple type of an EPCF term; remaining variables are schematic.
inline Result<ITypePtr, TypeError> infer_epcf(const TypeEnv& env, const TermPtr& t) {
  detail::LangTyper ty(false);
  ty.push_env(env);
  auto r = ty.infer(t);
  if (!r.ok()) return r;
  return canonicalize(ty.unifier().resolve(r.value()));
}

inline Result<ITypePtr, TypeError> infer_pcf(const TypeEnv& env, const TermPtr& t) {
  detail::LangTyper ty(true);
  ty.push_env(env);
  auto r = ty.infer(t);
  if (!r.ok()) return r;
  return canonicalize(ty.unifier().resolve(r.value()));
}

// true iff ty is an instance of the principal type
inline Result<bool, TypeError> check_epcf(const TypeEnv& env, const TermPtr& t, const TypePtr& ty) {
  auto r = infer_epcf(env, t);
  if (!r.ok()) return r.error();
  return itype_is_instance(r.value(), ty);
}

inline Result<bool, TypeError> check_pcf(const TypeEnv& env, const TermPtr& t, const TypePtr& ty) {
  auto r = infer_pcf(env, t);
  if (!r.ok()) return r.error();
  return itype_is_instance(r.value(), ty);
}

// sigma |= Delta: the context synthesized from an explicit substitution, in
// binding order; entries are canonicalized independently.
inline Result<std::vector<std::pair<Var, ITypePtr>>, TypeError> check_subst(const SubstPtr& s) {
  detail::LangTyper ty(false);
  auto r = ty.subst_env(s);
  if (!r.ok()) return r;
  std::vector<std::pair<Var, ITypePtr>> out;
  for (const auto& [v, it] : r.value())
    out.emplace_back(v, canonicalize(ty.unifier().resolve(it)));
  return out;
}

}  // namespace eam
