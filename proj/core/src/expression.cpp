#include "nulldist/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "nulldist/errors.hpp"

namespace nulldist {

struct Expression::Node {
  enum class Op {
    Const, Var, Neg, Add, Sub, Mul, Div, Pow, Lt, Le, Gt, Ge, Min, Max, Piecewise, Call
  };
  Op op = Op::Const;
  double value = 0.0;
  double (*fn)(double) = nullptr;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double t) const {
    switch (op) {
      case Op::Const:
        return value;
      case Op::Var:
        return t;
      case Op::Neg:
        return -args[0]->eval(t);
      case Op::Add:
        return args[0]->eval(t) + args[1]->eval(t);
      case Op::Sub:
        return args[0]->eval(t) - args[1]->eval(t);
      case Op::Mul:
        return args[0]->eval(t) * args[1]->eval(t);
      case Op::Div:
        return args[0]->eval(t) / args[1]->eval(t);
      case Op::Pow: {
        const double b = args[0]->eval(t);
        const double x = args[1]->eval(t);
        if (x == 2.0) return b * b;
        if (x == 3.0) return b * b * b;
        return std::pow(b, x);
      }
      case Op::Lt:
        return args[0]->eval(t) < args[1]->eval(t) ? 1.0 : 0.0;
      case Op::Le:
        return args[0]->eval(t) <= args[1]->eval(t) ? 1.0 : 0.0;
      case Op::Gt:
        return args[0]->eval(t) > args[1]->eval(t) ? 1.0 : 0.0;
      case Op::Ge:
        return args[0]->eval(t) >= args[1]->eval(t) ? 1.0 : 0.0;
      case Op::Min: {
        double m = args[0]->eval(t);
        for (std::size_t i = 1; i < args.size(); ++i) m = std::min(m, args[i]->eval(t));
        return m;
      }
      case Op::Max: {
        double m = args[0]->eval(t);
        for (std::size_t i = 1; i < args.size(); ++i) m = std::max(m, args[i]->eval(t));
        return m;
      }
      case Op::Piecewise: {
        for (std::size_t i = 0; i + 1 < args.size(); i += 2) {
          if (args[i]->eval(t) != 0.0) return args[i + 1]->eval(t);
        }
        return args.back()->eval(t);
      }
      case Op::Call:
        return fn(args[0]->eval(t));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, std::vector<NodePtr> args = {}, double value = 0.0,
             double (*fn)(double) = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->args = std::move(args);
  n->value = value;
  n->fn = fn;
  return n;
}

double sin_(double x) { return std::sin(x); }
double cos_(double x) { return std::cos(x); }
double tan_(double x) { return std::tan(x); }
double exp_(double x) { return std::exp(x); }
double log_(double x) { return std::log(x); }
double sqrt_(double x) { return std::sqrt(x); }
double abs_(double x) { return std::abs(x); }
double tanh_(double x) { return std::tanh(x); }

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = comparison();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + s_ + "': " + what + " at offset " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(const char* tok) {
    skip();
    const std::string t(tok);
    if (s_.compare(pos_, t.size(), t) == 0) {
      pos_ += t.size();
      return true;
    }
    return false;
  }

  NodePtr comparison() {
    NodePtr lhs = additive();
    if (eat("<=")) return make(Op::Le, {lhs, additive()});
    if (eat(">=")) return make(Op::Ge, {lhs, additive()});
    if (eat("<")) return make(Op::Lt, {lhs, additive()});
    if (eat(">")) return make(Op::Gt, {lhs, additive()});
    return lhs;
  }

  NodePtr additive() {
    NodePtr lhs = multiplicative();
    for (;;) {
      if (eat("+")) {
        lhs = make(Op::Add, {lhs, multiplicative()});
      } else if (eat("-")) {
        lhs = make(Op::Sub, {lhs, multiplicative()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr multiplicative() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat("*")) {
        lhs = make(Op::Mul, {lhs, unary()});
      } else if (eat("/")) {
        lhs = make(Op::Div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (eat("-")) return make(Op::Neg, {unary()});
    if (eat("+")) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (eat("^")) return make(Op::Pow, {base, unary()});
    return base;
  }

  std::vector<NodePtr> arguments() {
    std::vector<NodePtr> args;
    if (!eat("(")) fail("expected '('");
    args.push_back(comparison());
    while (eat(",")) args.push_back(comparison());
    if (!eat(")")) fail("expected ')'");
    return args;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make(Op::Const, {}, v);
    }
    if (eat("(")) {
      NodePtr inner = comparison();
      if (!eat(")")) fail("expected ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
        ++end;
      const std::string name = s_.substr(pos_, end - pos_);
      pos_ = end;
      if (name == "t") return make(Op::Var);
      if (name == "pi") return make(Op::Const, {}, std::numbers::pi);
      if (name == "e") return make(Op::Const, {}, std::numbers::e);
      if (name == "min" || name == "max") {
        auto args = arguments();
        return make(name == "min" ? Op::Min : Op::Max, std::move(args));
      }
      if (name == "piecewise") {
        auto args = arguments();
        if (args.size() < 3 || args.size() % 2 == 0) {
          fail("piecewise needs (cond, value)* pairs followed by a fallback value");
        }
        return make(Op::Piecewise, std::move(args));
      }
      double (*fn)(double) = nullptr;
      if (name == "sin") fn = sin_;
      if (name == "cos") fn = cos_;
      if (name == "tan") fn = tan_;
      if (name == "exp") fn = exp_;
      if (name == "log") fn = log_;
      if (name == "sqrt") fn = sqrt_;
      if (name == "abs") fn = abs_;
      if (name == "tanh") fn = tanh_;
      if (fn == nullptr) fail("unknown identifier '" + name + "'");
      auto args = arguments();
      if (args.size() != 1) fail("function '" + name + "' takes one argument");
      return make(Op::Call, std::move(args), 0.0, fn);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Parser p(text);
  return Expression(text, p.parse());
}

double Expression::operator()(double t) const { return root_->eval(t); }

}  // namespace nulldist
