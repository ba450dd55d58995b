#pragma once

// Goal-directed generation of closed, well-typed PCF terms. Generation is
// driven by the typing rules with a size budget; when the budget runs out the
// fallback is a literal at int and an eta-expanded literal at arrows.
// Deterministic per seed.

#include <cstdint>
#include <random>
#include <vector>

#include "eam/lang_typing.hpp"
#include "eam/syntax.hpp"
#include "eam/types.hpp"

namespace eam {

struct GenConfig {
  std::uint64_t seed = 0;
  std::uint64_t max_size = 30;
  double fix_probability = 0.15;
  TypePtr target = int_type();
};

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next(std::uint64_t bound) { return bound == 0 ? 0 : eng_() % bound; }
  bool chance(double p) {
    return static_cast<double>(eng_() >> 11) * (1.0 / 9007199254740992.0) < p;
  }

 private:
  std::mt19937_64 eng_;
};

class TermGen {
 public:
  TermGen(const GenConfig& cfg) : rng_(cfg.seed), fix_prob_(cfg.fix_probability), budget_(cfg.max_size) {}

  TermPtr gen(const TypePtr& ty, int depth) {
    if (budget_ == 0 || depth > 20) return fallback(ty);
    --budget_;

    std::vector<std::size_t> vars = candidates(ty);

    if (ty->is_ground()) {
      std::uint64_t roll = rng_.next(100);
      if (!vars.empty() && roll < 30) return pick_var(vars);
      if (roll < 42) return mk_numeral(rng_.next(6));
      if (roll < 52) return mk_succ(gen(int_type(), depth + 1));
      if (roll < 62) return mk_pred(gen(int_type(), depth + 1));
      if (roll < 76) return gen_ifz(ty, depth);
      if (roll < 92 || fix_depth_ >= 2 || !rng_.chance(fix_prob_ * 4)) return gen_app(ty, depth);
      return gen_fix(ty, depth);
    }

    std::uint64_t roll = rng_.next(100);
    if (!vars.empty() && roll < 25) return pick_var(vars);
    if (roll < 80) {
      Var x = fresh_var(var_name());
      env_.push_back(Entry{x, ty->dom(), false});
      TermPtr body = gen(ty->cod(), depth + 1);
      env_.pop_back();
      return mk_lambda(x, nullptr, body);
    }
    if (roll < 88) return gen_ifz(ty, depth);
    if (roll < 96 || fix_depth_ >= 2 || !rng_.chance(fix_prob_ * 4)) return gen_app(ty, depth);
    return gen_fix(ty, depth);
  }

 private:
  struct Entry {
    Var var;
    TypePtr type;
    bool recursive;  // fix-introduced: picked with reduced probability
  };

  std::string var_name() { return "v" + std::to_string(counter_++); }

  std::vector<std::size_t> candidates(const TypePtr& ty) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < env_.size(); ++i) {
      if (!type_equal(env_[i].type, ty)) continue;
      if (env_[i].recursive && !rng_.chance(0.3)) continue;
      out.push_back(i);
    }
    return out;
  }

  TermPtr pick_var(const std::vector<std::size_t>& vars) {
    return mk_variable(env_[vars[rng_.next(vars.size())]].var);
  }

  TermPtr fallback(const TypePtr& ty) {
    if (ty->is_ground()) {
      for (std::size_t i = env_.size(); i-- > 0;)
        if (!env_[i].recursive && type_equal(env_[i].type, ty) && rng_.chance(0.5))
          return mk_variable(env_[i].var);
      return mk_numeral(rng_.next(6));
    }
    Var x = fresh_var(var_name());
    env_.push_back(Entry{x, ty->dom(), false});
    TermPtr body = fallback(ty->cod());
    env_.pop_back();
    return mk_lambda(x, nullptr, body);
  }

  TypePtr random_arg_type(int depth) {
    std::uint64_t roll = rng_.next(100);
    if (depth >= 1 || roll < 65) return int_type();
    if (roll < 90) return arrow_type(int_type(), int_type());
    return arrow_type(random_arg_type(depth + 1), random_arg_type(depth + 1));
  }

  TermPtr gen_ifz(const TypePtr& ty, int depth) {
    TermPtr l = gen(int_type(), depth + 1);
    TermPtr a = gen(ty, depth + 1);
    TermPtr b = gen(ty, depth + 1);
    return mk_ifz(l, a, b);
  }

  TermPtr gen_app(const TypePtr& ty, int depth) {
    TypePtr arg_ty = random_arg_type(0);
    TermPtr f = gen(arrow_type(arg_ty, ty), depth + 1);
    TermPtr a = gen(arg_ty, depth + 1);
    return mk_apply(f, a);
  }

  TermPtr gen_fix(const TypePtr& ty, int depth) {
    Var f = fresh_var(var_name());
    env_.push_back(Entry{f, ty, true});
    ++fix_depth_;
    TermPtr body = gen(ty, depth + 1);
    --fix_depth_;
    env_.pop_back();
    return mk_fix(mk_lambda(f, nullptr, body));
  }

  Rng rng_;
  double fix_prob_;
  std::uint64_t budget_;
  std::vector<Entry> env_;
  int fix_depth_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace detail

// Closed PCF term whose principal type admits cfg.target as an instance.
inline TermPtr gen_typed_program(const GenConfig& cfg) {
  detail::TermGen g(cfg);
  TermPtr t = g.gen(cfg.target, 0);
  return t;
}

}  // namespace eam
