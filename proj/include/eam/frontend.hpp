#pragma once

// Concrete syntax.
//
//   term    ::= lam | app
//   lam     ::= "\" IDENT+ subst? "." term
//   subst   ::= "{" [binding ("," binding)*] "}"
//   binding ::= IDENT "<-" "(" subst "," term ")"
//   app     ::= prefix prefix*
//   prefix  ::= ("pred"|"succ"|"fix") prefix' | "ifz" prefix' prefix' prefix' | prefix'
//   prefix' ::= IDENT | NAT | "(" term ")"
//
// "--" starts a comment running to end of line. pred succ fix ifz are
// reserved. NAT literals desugar to succ^k(0); application is left
// associative and binds tighter than lambda. A multi-binder lambda carries
// its optional substitution on the innermost binder. Variables inside a
// binding's term are scoped to that binding's own substitution domain.

#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eam/syntax.hpp"
#include "eam/types.hpp"
#include "eam/util.hpp"

namespace eam {

struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

struct ParseError {
  SourceSpan span;
  std::string message;
  std::vector<std::string> expected;
};

namespace detail {

enum class Tok {
  Backslash,
  Ident,
  Nat,
  KwPred,
  KwSucc,
  KwFix,
  KwIfz,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Dot,
  Arrow,   // "->" (types)
  Assign,  // "<-"
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::uint64_t nat = 0;
  SourceSpan span;
};

inline const char* tok_name(Tok k) {
  switch (k) {
    case Tok::Backslash: return "\\";
    case Tok::Ident: return "identifier";
    case Tok::Nat: return "number";
    case Tok::KwPred: return "pred";
    case Tok::KwSucc: return "succ";
    case Tok::KwFix: return "fix";
    case Tok::KwIfz: return "ifz";
    case Tok::LParen: return "(";
    case Tok::RParen: return ")";
    case Tok::LBrace: return "{";
    case Tok::RBrace: return "}";
    case Tok::Comma: return ",";
    case Tok::Dot: return ".";
    case Tok::Arrow: return "->";
    case Tok::Assign: return "<-";
    case Tok::End: return "end of input";
  }
  return "?";
}

inline Result<std::vector<Token>, ParseError> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto err = [&](std::size_t at, std::string msg) {
    return ParseError{SourceSpan{at, at + 1 > n ? n : at + 1}, std::move(msg), {}};
  };
  while (i < n) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < n && text[i + 1] == '-') {
      while (i < n && text[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' ||
                       text[j] == '\''))
        ++j;
      std::string word = text.substr(i, j - i);
      Tok k = Tok::Ident;
      if (word == "pred") k = Tok::KwPred;
      else if (word == "succ") k = Tok::KwSucc;
      else if (word == "fix") k = Tok::KwFix;
      else if (word == "ifz") k = Tok::KwIfz;
      out.push_back(Token{k, std::move(word), 0, SourceSpan{start, j}});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::uint64_t v = 0;
      while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) {
        std::uint64_t d = static_cast<std::uint64_t>(text[j] - '0');
        if (v > (UINT64_MAX - d) / 10) return err(i, "numeral literal too large");
        v = v * 10 + d;
        ++j;
      }
      out.push_back(Token{Tok::Nat, text.substr(i, j - i), v, SourceSpan{start, j}});
      i = j;
      continue;
    }
    switch (c) {
      case '\\': out.push_back(Token{Tok::Backslash, "\\", 0, SourceSpan{start, i + 1}}); ++i; continue;
      case '(': out.push_back(Token{Tok::LParen, "(", 0, SourceSpan{start, i + 1}}); ++i; continue;
      case ')': out.push_back(Token{Tok::RParen, ")", 0, SourceSpan{start, i + 1}}); ++i; continue;
      case '{': out.push_back(Token{Tok::LBrace, "{", 0, SourceSpan{start, i + 1}}); ++i; continue;
      case '}': out.push_back(Token{Tok::RBrace, "}", 0, SourceSpan{start, i + 1}}); ++i; continue;
      case ',': out.push_back(Token{Tok::Comma, ",", 0, SourceSpan{start, i + 1}}); ++i; continue;
      case '.': out.push_back(Token{Tok::Dot, ".", 0, SourceSpan{start, i + 1}}); ++i; continue;
      case '<':
        if (i + 1 < n && text[i + 1] == '-') {
          out.push_back(Token{Tok::Assign, "<-", 0, SourceSpan{start, i + 2}});
          i += 2;
          continue;
        }
        return err(i, "expected '<-'");
      case '-':
        if (i + 1 < n && text[i + 1] == '>') {
          out.push_back(Token{Tok::Arrow, "->", 0, SourceSpan{start, i + 2}});
          i += 2;
          continue;
        }
        return err(i, "stray '-'");
      default:
        return err(i, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back(Token{Tok::End, "", 0, SourceSpan{n, n}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Result<TermPtr, ParseError> term_all() {
    auto t = parse_term();
    if (!t.ok()) return t;
    if (peek().kind != Tok::End) return fail("trailing input", {"end of input"});
    return t;
  }

  Result<TypePtr, ParseError> type_all() {
    auto t = parse_type();
    if (!t.ok()) return t;
    if (peek().kind != Tok::End)
      return ParseError{peek().span, "trailing input", {"end of input"}};
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_++]; }

  Result<TermPtr, ParseError> fail(std::string msg, std::vector<std::string> expected) {
    return ParseError{peek().span, std::move(msg), std::move(expected)};
  }

  bool starts_prefix(Tok k) const {
    return k == Tok::Ident || k == Tok::Nat || k == Tok::LParen || k == Tok::KwPred ||
           k == Tok::KwSucc || k == Tok::KwFix || k == Tok::KwIfz;
  }

  Var resolve(const std::string& name) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == name) return *it;
    auto it = free_.find(name);
    if (it != free_.end()) return it->second;
    Var v = fresh_var(name);
    free_.emplace(name, v);
    return v;
  }

  Result<TermPtr, ParseError> parse_term() {
    if (peek().kind == Tok::Backslash) return parse_lambda();
    return parse_app();
  }

  Result<TermPtr, ParseError> parse_lambda() {
    advance();  // backslash
    std::vector<Var> binders;
    while (peek().kind == Tok::Ident) binders.push_back(fresh_var(advance().text));
    if (binders.empty()) return fail("expected binder after '\\'", {"identifier"});
    SubstPtr subst = nullptr;
    std::vector<Var> domain;
    if (peek().kind == Tok::LBrace) {
      auto s = parse_subst(&domain);
      if (!s.ok()) return s.error();
      subst = s.value();
    }
    if (peek().kind != Tok::Dot) return fail("expected '.' after binders", {"."});
    advance();
    std::size_t mark = scope_.size();
    for (const Var& b : binders) scope_.push_back(b);
    for (const Var& d : domain) scope_.push_back(d);
    auto body = parse_term();
    scope_.resize(mark);
    if (!body.ok()) return body;
    TermPtr t = mk_lambda(binders.back(), subst, body.value());
    for (std::size_t i = binders.size() - 1; i-- > 0;) t = mk_lambda(binders[i], nullptr, t);
    return t;
  }

  // "{" [binding ("," binding)*] "}"; appends the domain variables in order.
  Result<SubstPtr, ParseError> parse_subst(std::vector<Var>* domain) {
    advance();  // {
    SubstPtr s = nullptr;
    std::set<std::string> names;
    if (peek().kind != Tok::RBrace) {
      for (;;) {
        if (peek().kind != Tok::Ident)
          return ParseError{peek().span, "expected binding variable", {"identifier", "}"}};
        Token name = advance();
        if (!names.insert(name.text).second)
          return ParseError{name.span, "duplicate variable '" + name.text + "' in substitution", {}};
        Var v = fresh_var(name.text);
        if (peek().kind != Tok::Assign) return ParseError{peek().span, "expected '<-'", {"<-"}};
        advance();
        if (peek().kind != Tok::LParen) return ParseError{peek().span, "expected '('", {"("}};
        advance();
        if (peek().kind != Tok::LBrace)
          return ParseError{peek().span, "expected substitution", {"{"}};
        std::vector<Var> inner_domain;
        auto inner = parse_subst(&inner_domain);
        if (!inner.ok()) return inner;
        if (peek().kind != Tok::Comma) return ParseError{peek().span, "expected ','", {","}};
        advance();
        // the binding's term sees only the binding's own substitution domain
        std::vector<Var> saved;
        saved.swap(scope_);
        scope_ = inner_domain;
        auto body = parse_term();
        scope_.swap(saved);
        if (!body.ok()) return body.error();
        if (peek().kind != Tok::RParen) return ParseError{peek().span, "expected ')'", {")"}};
        advance();
        s = subst_extend(std::move(s), SubstBinding{v, Closure{inner.value(), body.value()}});
        domain->push_back(v);
        if (peek().kind == Tok::Comma) {
          advance();
          continue;
        }
        break;
      }
    }
    if (peek().kind != Tok::RBrace) return ParseError{peek().span, "expected '}'", {"}"}};
    advance();
    return s;
  }

  Result<TermPtr, ParseError> parse_app() {
    auto head = parse_prefix();
    if (!head.ok()) return head;
    TermPtr t = head.value();
    while (starts_prefix(peek().kind)) {
      auto arg = parse_prefix();
      if (!arg.ok()) return arg;
      t = mk_apply(std::move(t), arg.value());
    }
    return t;
  }

  Result<TermPtr, ParseError> parse_prefix() {
    switch (peek().kind) {
      case Tok::KwPred: {
        advance();
        auto m = parse_atom();
        if (!m.ok()) return m;
        return mk_pred(m.value());
      }
      case Tok::KwSucc: {
        advance();
        auto m = parse_atom();
        if (!m.ok()) return m;
        return mk_succ(m.value());
      }
      case Tok::KwFix: {
        advance();
        auto m = parse_atom();
        if (!m.ok()) return m;
        return mk_fix(m.value());
      }
      case Tok::KwIfz: {
        advance();
        auto l = parse_atom();
        if (!l.ok()) return l;
        auto m = parse_atom();
        if (!m.ok()) return m;
        auto n = parse_atom();
        if (!n.ok()) return n;
        return mk_ifz(l.value(), m.value(), n.value());
      }
      default:
        return parse_atom();
    }
  }

  Result<TermPtr, ParseError> parse_atom() {
    switch (peek().kind) {
      case Tok::Ident:
        return mk_variable(resolve(advance().text));
      case Tok::Nat:
        return mk_numeral(advance().nat);
      case Tok::LParen: {
        advance();
        auto t = parse_term();
        if (!t.ok()) return t;
        if (peek().kind != Tok::RParen) return fail("expected ')'", {")"});
        advance();
        return t;
      }
      default:
        return fail("expected a term", {"identifier", "number", "("});
    }
  }

  Result<TypePtr, ParseError> parse_type() {
    auto a = parse_type_atom();
    if (!a.ok()) return a;
    if (peek().kind == Tok::Arrow) {
      advance();
      auto b = parse_type();
      if (!b.ok()) return b;
      return arrow_type(a.value(), b.value());
    }
    return a;
  }

  Result<TypePtr, ParseError> parse_type_atom() {
    if (peek().kind == Tok::Ident && peek().text == "int") {
      advance();
      return int_type();
    }
    if (peek().kind == Tok::LParen) {
      advance();
      auto t = parse_type();
      if (!t.ok()) return t;
      if (peek().kind != Tok::RParen)
        return Result<TypePtr, ParseError>(ParseError{peek().span, "expected ')'", {")"}});
      advance();
      return t;
    }
    return Result<TypePtr, ParseError>(
        ParseError{peek().span, "expected a type", {"int", "("}});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Var> scope_;
  std::unordered_map<std::string, Var> free_;
};

}  // namespace detail

inline Result<TermPtr, ParseError> parse_term(const std::string& text) {
  auto toks = detail::lex(text);
  if (!toks.ok()) return toks.error();
  detail::Parser p(toks.value());
  return p.term_all();
}

inline Result<TypePtr, ParseError> parse_type(const std::string& text) {
  auto toks = detail::lex(text);
  if (!toks.ok()) return toks.error();
  detail::Parser p(toks.value());
  return p.type_all();
}

// ---- printing ---------------------------------------------------------------

namespace detail {

enum class PrintCtx { Top, Head, Atom };

struct Printer {
  std::unordered_map<std::uint64_t, std::string> names;

  std::string display(const Var& v) const {
    auto it = names.find(v.uid);
    return it == names.end() ? v.name : it->second;
  }

  // picks a display name for a binder that avoids capturing any variable free
  // in the body it scopes over
  std::string pick_name(const std::string& base, const std::set<std::string>& used) {
    std::string candidate = base.empty() ? "x" : base;
    while (used.count(candidate)) candidate += "'";
    return candidate;
  }

  std::set<std::string> visible_free_names(const TermPtr& body,
                                           const std::vector<std::uint64_t>& bound_here) {
    std::set<std::string> used;
    for (const auto& [uid, v] : free_vars(body)) {
      bool here = false;
      for (std::uint64_t b : bound_here)
        if (b == uid) here = true;
      if (!here) used.insert(display(v));
    }
    return used;
  }

  std::string subst(const SubstPtr& s) {
    std::string out = "{";
    bool first = true;
    for (const SubstBinding* b : subst_bindings(s)) {
      if (!first) out += ", ";
      first = false;
      out += display(b->var);
      out += " <- (";
      out += subst(b->closure.subst);
      out += ", ";
      out += print(b->closure.term, PrintCtx::Top);
      out += ")";
    }
    out += "}";
    return out;
  }

  std::string print(const TermPtr& t, PrintCtx ctx) {
    if (auto n = numeral_of(t)) return std::to_string(*n);
    switch (t->kind) {
      case TermKind::Variable:
        return display(t->var);
      case TermKind::Zero:
        return "0";
      case TermKind::Lambda: {
        // collect a maximal run of binders whose outer lambdas carry no subst
        std::vector<const Term*> run;
        const Term* p = t.get();
        while (true) {
          run.push_back(p);
          if (p->subst || p->child0->kind != TermKind::Lambda) break;
          p = p->child0.get();
        }
        const Term* innermost = run.back();
        TermPtr body = innermost->child0;
        std::vector<std::uint64_t> bound;
        for (const Term* l : run) bound.push_back(l->var.uid);
        for (const SubstNode* sn = innermost->subst.get(); sn; sn = sn->tail.get())
          bound.push_back(sn->binding.var.uid);
        std::set<std::string> used = visible_free_names(body, bound);
        std::string out = "\\";
        for (std::size_t i = 0; i < run.size(); ++i) {
          std::string nm = pick_name(run[i]->var.name, used);
          used.insert(nm);
          names[run[i]->var.uid] = nm;
          if (i) out += " ";
          out += nm;
        }
        if (innermost->subst) {
          for (const SubstBinding* b : subst_bindings(innermost->subst)) {
            std::string nm = pick_name(b->var.name, used);
            used.insert(nm);
            names[b->var.uid] = nm;
          }
          out += " ";
          out += subst(innermost->subst);
        }
        out += ". ";
        out += print(body, PrintCtx::Top);
        if (ctx != PrintCtx::Top) return "(" + out + ")";
        return out;
      }
      case TermKind::Apply: {
        const Term* p = t.get();
        // flatten the left application spine
        std::vector<const Term*> spine;
        while (p->kind == TermKind::Apply) {
          spine.push_back(p);
          p = p->child0.get();
        }
        std::string out = print(spine.back()->child0, PrintCtx::Head);
        for (auto it = spine.rbegin(); it != spine.rend(); ++it) {
          out += " ";
          out += print((*it)->child1, PrintCtx::Atom);
        }
        if (ctx == PrintCtx::Top) return out;
        return "(" + out + ")";
      }
      case TermKind::Pred:
      case TermKind::Succ:
      case TermKind::Fix: {
        const char* kw = t->kind == TermKind::Pred ? "pred" : t->kind == TermKind::Succ ? "succ" : "fix";
        std::string out = std::string(kw) + " " + print(t->child0, PrintCtx::Atom);
        if (ctx == PrintCtx::Atom) return "(" + out + ")";
        return out;
      }
      case TermKind::Ifz: {
        std::string out = "ifz " + print(t->child0, PrintCtx::Atom) + " " +
                          print(t->child1, PrintCtx::Atom) + " " + print(t->child2, PrintCtx::Atom);
        if (ctx == PrintCtx::Atom) return "(" + out + ")";
        return out;
      }
    }
    return "?";
  }
};

}  // namespace detail

// Emits concrete syntax that reparses to an alpha-equal term.
inline std::string print_term(const TermPtr& t) {
  detail::Printer p;
  return p.print(t, detail::PrintCtx::Top);
}

inline std::string print_evalue(const EValue& v) { return print_term(evalue_term(v)); }

}  // namespace eam
