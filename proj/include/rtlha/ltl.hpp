#pragma once

// LTL formulas: syntax tree, parser and negation normal form.
//
// Concrete syntax (tightest first):
//   ~ f   [] f   <> f   X f        prefix operators
//   f U g   f R g                  right associative
//   f /\ g
//   f \/ g
//   f -> g                         right associative
// plus `true`, `false`, parentheses and proposition names, which may contain
// letters, digits, `_`, `?`, `.` and `-` (but not `->`).

#include "rtlha/rational.hpp"

#include <cctype>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rtlha {

class SyntaxError : public std::runtime_error {
public:
  SyntaxError(const std::string& what, std::size_t column)
      : std::runtime_error("syntax error at column " + std::to_string(column) + ": " + what), column_(column) {}
  std::size_t column() const { return column_; }

private:
  std::size_t column_;
};

enum class LtlOp { True, False, Prop, Not, And, Or, Implies, Next, Until, Release, Always, Eventually };

class Formula {
public:
  static Formula constant(bool v) { return Formula(v ? LtlOp::True : LtlOp::False).finish(); }
  static Formula prop(std::string name) {
    Formula f(LtlOp::Prop);
    f.node_->name = std::move(name);
    return f.finish();
  }
  static Formula unary(LtlOp op, Formula a) {
    Formula f(op);
    f.node_->args = {std::move(a)};
    return f.finish();
  }
  static Formula binary(LtlOp op, Formula a, Formula b) {
    Formula f(op);
    f.node_->args = {std::move(a), std::move(b)};
    return f.finish();
  }

  LtlOp op() const { return node_->op; }
  const std::string& name() const { return node_->name; }
  const Formula& arg(std::size_t i = 0) const { return node_->args.at(i); }
  const Formula& lhs() const { return arg(0); }
  const Formula& rhs() const { return arg(1); }

  bool is_literal() const {
    return op() == LtlOp::Prop || op() == LtlOp::True || op() == LtlOp::False ||
           (op() == LtlOp::Not && arg().op() == LtlOp::Prop);
  }

  /// Fully parenthesized rendering in the input syntax; also the identity
  /// used for formula sets.
  const std::string& str() const { return node_->key; }

private:
  Formula finish() {
    node_->key = render();
    return *this;
  }

  std::string render() const {
    switch (op()) {
      case LtlOp::True: return "true";
      case LtlOp::False: return "false";
      case LtlOp::Prop: return name();
      case LtlOp::Not: return "~" + wrap(arg());
      case LtlOp::Next: return "X " + wrap(arg());
      case LtlOp::Always: return "[]" + wrap(arg());
      case LtlOp::Eventually: return "<>" + wrap(arg());
      case LtlOp::And: return wrap(lhs()) + " /\\ " + wrap(rhs());
      case LtlOp::Or: return wrap(lhs()) + " \\/ " + wrap(rhs());
      case LtlOp::Implies: return wrap(lhs()) + " -> " + wrap(rhs());
      case LtlOp::Until: return wrap(lhs()) + " U " + wrap(rhs());
      case LtlOp::Release: return wrap(lhs()) + " R " + wrap(rhs());
    }
    return "?";
  }

public:
  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : node_->args) n += a.size();
    return n;
  }

  void collect_props(std::set<std::string>& out) const {
    if (op() == LtlOp::Prop) out.insert(name());
    for (const auto& a : node_->args) a.collect_props(out);
  }

  friend bool operator==(const Formula& a, const Formula& b) { return a.str() == b.str(); }
  friend bool operator<(const Formula& a, const Formula& b) { return a.str() < b.str(); }

private:
  struct Node {
    LtlOp op;
    std::string name;
    std::vector<Formula> args;
    std::string key;
  };

  explicit Formula(LtlOp op) : node_(std::make_shared<Node>(Node{op, {}, {}, {}})) {}

  static std::string wrap(const Formula& f) {
    auto s = f.str();
    return f.op() == LtlOp::Prop || f.op() == LtlOp::True || f.op() == LtlOp::False ? s : "(" + s + ")";
  }

  std::shared_ptr<Node> node_;
};

inline Formula operator!(Formula f) { return Formula::unary(LtlOp::Not, std::move(f)); }
inline Formula operator&&(Formula a, Formula b) { return Formula::binary(LtlOp::And, std::move(a), std::move(b)); }
inline Formula operator||(Formula a, Formula b) { return Formula::binary(LtlOp::Or, std::move(a), std::move(b)); }
inline Formula always(Formula f) { return Formula::unary(LtlOp::Always, std::move(f)); }
inline Formula eventually(Formula f) { return Formula::unary(LtlOp::Eventually, std::move(f)); }
inline Formula next(Formula f) { return Formula::unary(LtlOp::Next, std::move(f)); }
inline Formula until(Formula a, Formula b) { return Formula::binary(LtlOp::Until, std::move(a), std::move(b)); }
inline Formula release(Formula a, Formula b) { return Formula::binary(LtlOp::Release, std::move(a), std::move(b)); }
inline Formula implies(Formula a, Formula b) { return Formula::binary(LtlOp::Implies, std::move(a), std::move(b)); }

namespace detail {

class FormulaParser {
public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Formula parse() {
    skip();
    if (pos_ >= text_.size()) fail("empty formula");
    Formula f = parse_implies();
    skip();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

private:
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, pos_ + 1); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '?' || c == '.' || c == '-' || c == '\'';
  }

  bool symbol(std::string_view s) {
    skip();
    if (text_.substr(pos_, s.size()) == s) {
      pos_ += s.size();
      return true;
    }
    return false;
  }

  std::string peek_word() {
    skip();
    std::size_t end = pos_;
    while (end < text_.size() && ident_char(text_[end])) {
      if (text_[end] == '-' && end + 1 < text_.size() && text_[end + 1] == '>') break;
      ++end;
    }
    return std::string(text_.substr(pos_, end - pos_));
  }

  bool keyword(std::string_view kw) {
    if (peek_word() == kw) {
      pos_ += kw.size();
      return true;
    }
    return false;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (symbol("->")) return implies(std::move(lhs), parse_implies());
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (symbol("\\/")) f = std::move(f) || parse_and();
    return f;
  }

  Formula parse_and() {
    Formula f = parse_until();
    while (symbol("/\\")) f = std::move(f) && parse_until();
    return f;
  }

  Formula parse_until() {
    Formula lhs = parse_unary();
    if (keyword("U")) return until(std::move(lhs), parse_until());
    if (keyword("R")) return release(std::move(lhs), parse_until());
    return lhs;
  }

  Formula parse_unary() {
    if (symbol("~")) return !parse_unary();
    if (symbol("[]")) return always(parse_unary());
    if (symbol("<>")) return eventually(parse_unary());
    if (keyword("X")) return next(parse_unary());
    return parse_atom();
  }

  Formula parse_atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of formula");
    if (symbol("(")) {
      Formula f = parse_implies();
      if (!symbol(")")) fail("expected ')'");
      return f;
    }
    std::string w = peek_word();
    if (w.empty()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    if (w == "U" || w == "R") fail("operator '" + w + "' without left operand");
    pos_ += w.size();
    if (w == "true") return Formula::constant(true);
    if (w == "false") return Formula::constant(false);
    return Formula::prop(w);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline Formula nnf(const Formula& f, bool negated) {
  switch (f.op()) {
    case LtlOp::True: return Formula::constant(!negated);
    case LtlOp::False: return Formula::constant(negated);
    case LtlOp::Prop: return negated ? !f : f;
    case LtlOp::Not: return nnf(f.arg(), !negated);
    case LtlOp::And:
      return negated ? nnf(f.lhs(), true) || nnf(f.rhs(), true) : nnf(f.lhs(), false) && nnf(f.rhs(), false);
    case LtlOp::Or:
      return negated ? nnf(f.lhs(), true) && nnf(f.rhs(), true) : nnf(f.lhs(), false) || nnf(f.rhs(), false);
    case LtlOp::Implies:
      return negated ? nnf(f.lhs(), false) && nnf(f.rhs(), true) : nnf(f.lhs(), true) || nnf(f.rhs(), false);
    case LtlOp::Next: return next(nnf(f.arg(), negated));
    case LtlOp::Until:
      return negated ? release(nnf(f.lhs(), true), nnf(f.rhs(), true))
                     : until(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case LtlOp::Release:
      return negated ? until(nnf(f.lhs(), true), nnf(f.rhs(), true))
                     : release(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case LtlOp::Always: return negated ? eventually(nnf(f.arg(), true)) : always(nnf(f.arg(), false));
    case LtlOp::Eventually: return negated ? always(nnf(f.arg(), true)) : eventually(nnf(f.arg(), false));
  }
  return f;
}

}  // namespace detail

inline Formula parse_formula(std::string_view text) { return detail::FormulaParser(text).parse(); }

/// Negations pushed down to propositions; `->` eliminated.
inline Formula to_nnf(const Formula& f) { return detail::nnf(f, false); }

inline bool is_nnf(const Formula& f) {
  switch (f.op()) {
    case LtlOp::Implies: return false;
    case LtlOp::Not: return f.arg().op() == LtlOp::Prop;
    case LtlOp::True:
    case LtlOp::False:
    case LtlOp::Prop: return true;
    case LtlOp::Next:
    case LtlOp::Always:
    case LtlOp::Eventually: return is_nnf(f.arg());
    default: return is_nnf(f.lhs()) && is_nnf(f.rhs());
  }
}

}  // namespace rtlha
