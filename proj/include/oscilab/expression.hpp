#pragma once

// Tiny arithmetic expression language for user-supplied phases and amplitudes.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('-' | '+') unary | power
//   power  := atom ('^' unary)?          right associative
//   atom   := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// Functions: sqrt exp log abs sin cos tan tanh pow min max.  Constant: pi.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oscilab/error.hpp"

namespace oscilab {

class Expression {
public:
  Expression() = default;

  /// Compiles `text`; identifiers must appear in `variables` (their position is the slot index).
  static Expression compile(const std::string& text, const std::vector<std::string>& variables) {
    Parser p{text, variables, 0};
    Expression e;
    e.text_ = text;
    e.root_ = p.parse_expr();
    p.skip_space();
    if (p.pos != text.size()) p.fail("unexpected trailing input");
    e.arity_ = variables.size();
    return e;
  }

  double operator()(std::span<const double> values) const {
    if (!root_) throw error("Expression: evaluating an empty expression");
    return eval(*root_, values);
  }

  const std::string& text() const { return text_; }
  bool empty() const { return !root_; }

private:
  enum class Op { number, variable, neg, add, sub, mul, div, pow, call };

  struct Node {
    Op op = Op::number;
    double value = 0.0;
    std::size_t slot = 0;
    std::string fn;
    std::vector<std::shared_ptr<const Node>> args;
  };
  using NodePtr = std::shared_ptr<const Node>;

  static double eval(const Node& n, std::span<const double> v) {
    switch (n.op) {
      case Op::number: return n.value;
      case Op::variable: return v[n.slot];
      case Op::neg: return -eval(*n.args[0], v);
      case Op::add: return eval(*n.args[0], v) + eval(*n.args[1], v);
      case Op::sub: return eval(*n.args[0], v) - eval(*n.args[1], v);
      case Op::mul: return eval(*n.args[0], v) * eval(*n.args[1], v);
      case Op::div: return eval(*n.args[0], v) / eval(*n.args[1], v);
      case Op::pow: return std::pow(eval(*n.args[0], v), eval(*n.args[1], v));
      case Op::call: return call(n, v);
    }
    return 0.0;
  }

  static double call(const Node& n, std::span<const double> v) {
    const double a = eval(*n.args[0], v);
    if (n.fn == "sqrt") return std::sqrt(a);
    if (n.fn == "exp") return std::exp(a);
    if (n.fn == "log") return std::log(a);
    if (n.fn == "abs") return std::abs(a);
    if (n.fn == "sin") return std::sin(a);
    if (n.fn == "cos") return std::cos(a);
    if (n.fn == "tan") return std::tan(a);
    if (n.fn == "tanh") return std::tanh(a);
    const double b = eval(*n.args[1], v);
    if (n.fn == "pow") return std::pow(a, b);
    if (n.fn == "min") return std::min(a, b);
    return std::max(a, b);
  }

  struct Parser {
    const std::string& s;
    const std::vector<std::string>& vars;
    std::size_t pos;

    [[noreturn]] void fail(const std::string& what) const {
      throw error("expression '" + s + "': " + what + " at offset " + std::to_string(pos));
    }

    void skip_space() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool accept(char c) {
      skip_space();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    static NodePtr binary(Op op, NodePtr a, NodePtr b) {
      auto n = std::make_shared<Node>();
      n->op = op;
      n->args = {std::move(a), std::move(b)};
      return n;
    }

    NodePtr parse_expr() {
      NodePtr lhs = parse_term();
      for (;;) {
        if (accept('+')) lhs = binary(Op::add, lhs, parse_term());
        else if (accept('-')) lhs = binary(Op::sub, lhs, parse_term());
        else return lhs;
      }
    }

    NodePtr parse_term() {
      NodePtr lhs = parse_unary();
      for (;;) {
        if (accept('*')) lhs = binary(Op::mul, lhs, parse_unary());
        else if (accept('/')) lhs = binary(Op::div, lhs, parse_unary());
        else return lhs;
      }
    }

    NodePtr parse_unary() {
      if (accept('-')) {
        auto n = std::make_shared<Node>();
        n->op = Op::neg;
        n->args = {parse_unary()};
        return n;
      }
      if (accept('+')) return parse_unary();
      return parse_power();
    }

    NodePtr parse_power() {
      NodePtr base = parse_atom();
      if (accept('^')) return binary(Op::pow, base, parse_unary());
      return base;
    }

    NodePtr parse_atom() {
      skip_space();
      if (pos >= s.size()) fail("unexpected end of input");
      if (accept('(')) {
        NodePtr e = parse_expr();
        if (!accept(')')) fail("expected ')'");
        return e;
      }
      const char c = s[pos];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        const char* begin = s.c_str() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos += static_cast<std::size_t>(end - begin);
        auto n = std::make_shared<Node>();
        n->value = v;
        return n;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        const std::string name = s.substr(start, pos - start);
        if (accept('(')) return parse_call(name);
        for (std::size_t i = 0; i < vars.size(); ++i) {
          if (vars[i] == name) {
            auto n = std::make_shared<Node>();
            n->op = Op::variable;
            n->slot = i;
            return n;
          }
        }
        if (name == "pi") {
          auto n = std::make_shared<Node>();
          n->value = std::numbers::pi;
          return n;
        }
        pos = start;
        fail("unknown identifier '" + name + "'");
      }
      fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_call(const std::string& name) {
      static const std::vector<std::string> unary = {"sqrt", "exp", "log", "abs", "sin", "cos", "tan", "tanh"};
      static const std::vector<std::string> binary_fns = {"pow", "min", "max"};
      std::size_t want = 0;
      for (const auto& f : unary) if (f == name) want = 1;
      for (const auto& f : binary_fns) if (f == name) want = 2;
      if (want == 0) fail("unknown function '" + name + "'");
      auto n = std::make_shared<Node>();
      n->op = Op::call;
      n->fn = name;
      n->args.push_back(parse_expr());
      while (accept(',')) n->args.push_back(parse_expr());
      if (!accept(')')) fail("expected ')' after arguments of '" + name + "'");
      if (n->args.size() != want) fail("function '" + name + "' takes " + std::to_string(want) + " argument(s)");
      return n;
    }
  };

  std::string text_;
  NodePtr root_;
  std::size_t arity_ = 0;
};

}  // namespace oscilab
