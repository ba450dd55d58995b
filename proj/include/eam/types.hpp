#pragma once

#include <memory>
#include <string>
#include <vector>

namespace eam {

class SimpleType;
using TypePtr = std::shared_ptr<const SimpleType>;

// Simple types over the ground type int. Arrows associate to the right.
class SimpleType {
 public:
  SimpleType() = default;
  SimpleType(TypePtr d, TypePtr c) : dom_(std::move(d)), cod_(std::move(c)) {}

  bool is_ground() const { return dom_ == nullptr; }
  bool is_arrow() const { return dom_ != nullptr; }
  const TypePtr& dom() const { return dom_; }
  const TypePtr& cod() const { return cod_; }

 private:
  TypePtr dom_, cod_;
};

inline TypePtr int_type() {
  static const TypePtr t = std::make_shared<SimpleType>();
  return t;
}

inline TypePtr arrow_type(TypePtr d, TypePtr c) {
  return std::make_shared<SimpleType>(std::move(d), std::move(c));
}

// args[0] -> args[1] -> ... -> res
inline TypePtr arrow_chain(const std::vector<TypePtr>& args, TypePtr res) {
  for (auto it = args.rbegin(); it != args.rend(); ++it) res = arrow_type(*it, res);
  return res;
}

inline bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->is_ground() != b->is_ground()) return false;
  if (a->is_ground()) return true;
  return type_equal(a->dom(), b->dom()) && type_equal(a->cod(), b->cod());
}

inline std::string show_type(const TypePtr& t) {
  if (t->is_ground()) return "int";
  std::string d = show_type(t->dom());
  if (t->dom()->is_arrow()) d = "(" + d + ")";
  return d + " -> " + show_type(t->cod());
}

}  // namespace eam
