#pragma once

// First-order unification over int/arrow with an occurs check, plus the
// instantiation/canonicalization helpers used by both type systems.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eam/types.hpp"

namespace eam {

struct InferType;
using ITypePtr = std::shared_ptr<const InferType>;

// var >= 0: unification variable; otherwise int (no dom) or arrow.
struct InferType {
  std::int64_t var = -1;
  ITypePtr dom, cod;

  bool is_var() const { return var >= 0; }
  bool is_arrow() const { return var < 0 && dom != nullptr; }
  bool is_int() const { return var < 0 && dom == nullptr; }
};

inline ITypePtr itype_int() {
  static const ITypePtr t = std::make_shared<InferType>();
  return t;
}
inline ITypePtr itype_arrow(ITypePtr d, ITypePtr c) {
  auto t = std::make_shared<InferType>();
  t->dom = std::move(d);
  t->cod = std::move(c);
  return t;
}
inline ITypePtr itype_var(std::int64_t id) {
  auto t = std::make_shared<InferType>();
  t->var = id;
  return t;
}

inline ITypePtr itype_from_simple(const TypePtr& t) {
  if (t->is_ground()) return itype_int();
  return itype_arrow(itype_from_simple(t->dom()), itype_from_simple(t->cod()));
}

inline ITypePtr itype_arrow_chain(const std::vector<ITypePtr>& args, ITypePtr res) {
  for (auto it = args.rbegin(); it != args.rend(); ++it) res = itype_arrow(*it, res);
  return res;
}

class Unifier {
 public:
  ITypePtr fresh() {
    sub_.push_back(nullptr);
    return itype_var(static_cast<std::int64_t>(sub_.size()) - 1);
  }

  ITypePtr shallow(ITypePtr t) const {
    while (t->is_var() && sub_[static_cast<std::size_t>(t->var)])
      t = sub_[static_cast<std::size_t>(t->var)];
    return t;
  }

  bool occurs(std::int64_t v, const ITypePtr& t0) const {
    ITypePtr t = shallow(t0);
    if (t->is_var()) return t->var == v;
    if (t->is_arrow()) return occurs(v, t->dom) || occurs(v, t->cod);
    return false;
  }

  // most general unifier; false on constructor clash or occurs failure
  bool unify(const ITypePtr& a0, const ITypePtr& b0) {
    ITypePtr a = shallow(a0);
    ITypePtr b = shallow(b0);
    if (a->is_var() && b->is_var() && a->var == b->var) return true;
    if (a->is_var()) {
      if (occurs(a->var, b)) return false;
      sub_[static_cast<std::size_t>(a->var)] = b;
      return true;
    }
    if (b->is_var()) {
      if (occurs(b->var, a)) return false;
      sub_[static_cast<std::size_t>(b->var)] = a;
      return true;
    }
    if (a->is_int() && b->is_int()) return true;
    if (a->is_arrow() && b->is_arrow()) return unify(a->dom, b->dom) && unify(a->cod, b->cod);
    return false;
  }

  ITypePtr resolve(const ITypePtr& t0) const {
    ITypePtr t = shallow(t0);
    if (t->is_arrow()) return itype_arrow(resolve(t->dom), resolve(t->cod));
    return t;
  }

 private:
  std::vector<ITypePtr> sub_;
};

namespace detail {
inline ITypePtr renumber(const ITypePtr& t, std::map<std::int64_t, std::int64_t>& m) {
  if (t->is_var()) {
    auto it = m.find(t->var);
    if (it == m.end()) it = m.emplace(t->var, static_cast<std::int64_t>(m.size())).first;
    return itype_var(it->second);
  }
  if (t->is_arrow()) {
    ITypePtr d = renumber(t->dom, m);
    return itype_arrow(std::move(d), renumber(t->cod, m));
  }
  return t;
}
}  // namespace detail

// Renames remaining variables to 0,1,... in first-occurrence order. Apply to
// fully resolved types only.
inline ITypePtr canonicalize(const ITypePtr& resolved) {
  std::map<std::int64_t, std::int64_t> m;
  return detail::renumber(resolved, m);
}

// Copies a canonical type, mapping each distinct variable to a fresh one of u.
inline ITypePtr instantiate(const ITypePtr& canonical, Unifier& u) {
  std::map<std::int64_t, ITypePtr> m;
  struct Rec {
    Unifier& u;
    std::map<std::int64_t, ITypePtr>& m;
    ITypePtr operator()(const ITypePtr& t) {
      if (t->is_var()) {
        auto it = m.find(t->var);
        if (it == m.end()) it = m.emplace(t->var, u.fresh()).first;
        return it->second;
      }
      if (t->is_arrow()) {
        ITypePtr d = (*this)(t->dom);
        return itype_arrow(std::move(d), (*this)(t->cod));
      }
      return t;
    }
  } rec{u, m};
  return rec(canonical);
}

inline std::optional<TypePtr> itype_to_simple(const ITypePtr& resolved) {
  if (resolved->is_var()) return std::nullopt;
  if (resolved->is_int()) return int_type();
  auto d = itype_to_simple(resolved->dom);
  if (!d) return std::nullopt;
  auto c = itype_to_simple(resolved->cod);
  if (!c) return std::nullopt;
  return arrow_type(*d, *c);
}

inline bool itype_equal(const ITypePtr& a, const ITypePtr& b) {
  if (a->is_var() || b->is_var()) return a->is_var() && b->is_var() && a->var == b->var;
  if (a->is_int() || b->is_int()) return a->is_int() && b->is_int();
  return itype_equal(a->dom, b->dom) && itype_equal(a->cod, b->cod);
}

namespace detail {
inline bool match_instance(const ITypePtr& pat, const TypePtr& ty,
                           std::map<std::int64_t, TypePtr>& asg) {
  if (pat->is_var()) {
    auto it = asg.find(pat->var);
    if (it == asg.end()) {
      asg.emplace(pat->var, ty);
      return true;
    }
    return type_equal(it->second, ty);
  }
  if (pat->is_int()) return ty->is_ground();
  if (!ty->is_arrow()) return false;
  return match_instance(pat->dom, ty->dom(), asg) && match_instance(pat->cod, ty->cod(), asg);
}
}  // namespace detail

// One-way matching: is ty an instance of the (canonical) principal type?
inline bool itype_is_instance(const ITypePtr& principal, const TypePtr& ty) {
  std::map<std::int64_t, TypePtr> asg;
  return detail::match_instance(principal, ty, asg);
}

// Variables print as ?a, ?b, ...
inline std::string show_itype(const ITypePtr& t) {
  if (t->is_var()) {
    std::string name;
    std::int64_t v = t->var;
    do {
      name.insert(name.begin(), static_cast<char>('a' + v % 26));
      v = v / 26 - 1;
    } while (v >= 0);
    return "?" + name;
  }
  if (t->is_int()) return "int";
  std::string d = show_itype(t->dom);
  if (t->dom->is_arrow()) d = "(" + d + ")";
  return d + " -> " + show_itype(t->cod);
}

}  // namespace eam
