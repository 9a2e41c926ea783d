#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "susyqm/error.hpp"

namespace susyqm::expr {

/// Parsed arithmetic expression over named variables.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?
///   primary := number | name | name '(' expr ')' | '(' expr ')'
///
/// Functions: exp sinh cosh tanh sin cos log sqrt. The constant `pi` is
/// predefined. `#` starts a comment running to the end of the line.
class Expression {
 public:
  static Expression parse(std::string_view text, std::vector<std::string> variables) {
    Parser p{text, variables, 0};
    auto root = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("unexpected '" + std::string(1, text[p.pos]) + "'");
    return Expression(std::move(root), std::move(variables));
  }

  const std::vector<std::string>& variables() const noexcept { return vars_; }

  double operator()(const std::vector<double>& args) const {
    if (args.size() != vars_.size()) throw invalid_input("expression: wrong number of arguments");
    return eval(*root_, args);
  }
  double operator()(double a) const { return (*this)(std::vector<double>{a}); }
  double operator()(double a, double b) const { return (*this)(std::vector<double>{a, b}); }

 private:
  enum class Op { number, variable, add, sub, mul, div, pow, neg, call };
  enum class Fn { exp, sinh, cosh, tanh, sin, cos, log, sqrt };

  struct Node {
    Op op;
    double value = 0.0;
    std::size_t var = 0;
    Fn fn = Fn::exp;
    std::unique_ptr<Node> a, b;
  };

  Expression(std::unique_ptr<Node> root, std::vector<std::string> vars)
      : root_(std::move(root)), vars_(std::move(vars)) {}

  static double apply(Fn f, double x) {
    switch (f) {
      case Fn::exp: return std::exp(x);
      case Fn::sinh: return std::sinh(x);
      case Fn::cosh: return std::cosh(x);
      case Fn::tanh: return std::tanh(x);
      case Fn::sin: return std::sin(x);
      case Fn::cos: return std::cos(x);
      case Fn::log: return std::log(x);
      case Fn::sqrt: return std::sqrt(x);
    }
    return NAN;
  }

  static double eval(const Node& n, const std::vector<double>& args) {
    switch (n.op) {
      case Op::number: return n.value;
      case Op::variable: return args[n.var];
      case Op::add: return eval(*n.a, args) + eval(*n.b, args);
      case Op::sub: return eval(*n.a, args) - eval(*n.b, args);
      case Op::mul: return eval(*n.a, args) * eval(*n.b, args);
      case Op::div: return eval(*n.a, args) / eval(*n.b, args);
      case Op::pow: return std::pow(eval(*n.a, args), eval(*n.b, args));
      case Op::neg: return -eval(*n.a, args);
      case Op::call: return apply(n.fn, eval(*n.a, args));
    }
    return NAN;
  }

  struct Parser {
    std::string_view s;
    const std::vector<std::string>& vars;
    std::size_t pos;

    [[noreturn]] void fail(const std::string& what) const {
      throw invalid_input("expression: " + what + " at offset " + std::to_string(pos));
    }

    void skip() {
      while (pos < s.size()) {
        if (s[pos] == '#') {
          while (pos < s.size() && s[pos] != '\n') ++pos;
        } else if (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' || s[pos] == '\r') {
          ++pos;
        } else {
          break;
        }
      }
    }

    bool eat(char c) {
      skip();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    static std::unique_ptr<Node> binary(Op op, std::unique_ptr<Node> a, std::unique_ptr<Node> b) {
      auto n = std::make_unique<Node>();
      n->op = op;
      n->a = std::move(a);
      n->b = std::move(b);
      return n;
    }

    std::unique_ptr<Node> expr() {
      auto lhs = term();
      for (;;) {
        if (eat('+'))
          lhs = binary(Op::add, std::move(lhs), term());
        else if (eat('-'))
          lhs = binary(Op::sub, std::move(lhs), term());
        else
          return lhs;
      }
    }

    std::unique_ptr<Node> term() {
      auto lhs = unary();
      for (;;) {
        if (eat('*'))
          lhs = binary(Op::mul, std::move(lhs), unary());
        else if (eat('/'))
          lhs = binary(Op::div, std::move(lhs), unary());
        else
          return lhs;
      }
    }

    std::unique_ptr<Node> unary() {
      if (eat('-')) return binary(Op::neg, unary(), nullptr);
      if (eat('+')) return unary();
      return power();
    }

    std::unique_ptr<Node> power() {
      auto base = primary();
      if (eat('^')) return binary(Op::pow, std::move(base), unary());
      return base;
    }

    std::unique_ptr<Node> primary() {
      skip();
      if (pos >= s.size()) fail("unexpected end of input");
      const char c = s[pos];
      if (c == '(') {
        ++pos;
        auto e = expr();
        if (!eat(')')) fail("expected ')'");
        return e;
      }
      if ((c >= '0' && c <= '9') || c == '.') {
        double v = 0.0;
        auto [end, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v);
        if (ec != std::errc()) fail("malformed number");
        pos = static_cast<std::size_t>(end - s.data());
        auto n = std::make_unique<Node>();
        n->op = Op::number;
        n->value = v;
        return n;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
        const std::string name(s.substr(start, pos - start));
        skip();
        if (pos < s.size() && s[pos] == '(') {
          static const std::pair<const char*, Fn> table[] = {{"exp", Fn::exp},   {"sinh", Fn::sinh}, {"cosh", Fn::cosh},
                                                             {"tanh", Fn::tanh}, {"sin", Fn::sin},   {"cos", Fn::cos},
                                                             {"log", Fn::log},   {"sqrt", Fn::sqrt}};
          for (const auto& [fname, fn] : table) {
            if (name == fname) {
              ++pos;
              auto n = std::make_unique<Node>();
              n->op = Op::call;
              n->fn = fn;
              n->a = expr();
              if (!eat(')')) fail("expected ')' after argument of " + name);
              return n;
            }
          }
          fail("unknown function '" + name + "'");
        }
        for (std::size_t i = 0; i < vars.size(); ++i) {
          if (vars[i] == name) {
            auto n = std::make_unique<Node>();
            n->op = Op::variable;
            n->var = i;
            return n;
          }
        }
        if (name == "pi") {
          auto n = std::make_unique<Node>();
          n->op = Op::number;
          n->value = std::numbers::pi;
          return n;
        }
        fail("unknown name '" + name + "'");
      }
      fail("unexpected '" + std::string(1, c) + "'");
    }
  };

  std::shared_ptr<const Node> root_;
  std::vector<std::string> vars_;
};

}  // namespace susyqm::expr
