#include "tgsm/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "tgsm/errors.hpp"

namespace tgsm {

struct Expression::Node {
  enum class Op { number, var_x, var_y, var_t, add, sub, mul, div, pow, neg, sin, cos } op = Op::number;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;

  double eval(double x, double y, double t) const {
    switch (op) {
      case Op::number: return value;
      case Op::var_x: return x;
      case Op::var_y: return y;
      case Op::var_t: return t;
      case Op::add: return a->eval(x, y, t) + b->eval(x, y, t);
      case Op::sub: return a->eval(x, y, t) - b->eval(x, y, t);
      case Op::mul: return a->eval(x, y, t) * b->eval(x, y, t);
      case Op::div: return a->eval(x, y, t) / b->eval(x, y, t);
      case Op::pow: return std::pow(a->eval(x, y, t), b->eval(x, y, t));
      case Op::neg: return -a->eval(x, y, t);
      case Op::sin: return std::sin(a->eval(x, y, t));
      case Op::cos: return std::cos(a->eval(x, y, t));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->value = v;
  return n;
}

class ExprParser {
 public:
  explicit ExprParser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = sum();
    skip();
    if (pos_ < s_.size()) fail("unexpected character");
    return n;
  }
  bool uses_t = false;

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression '" + s_ + "': " + msg, 1, static_cast<int>(pos_) + 1);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  NodePtr sum() {
    NodePtr n = product();
    while (true) {
      if (accept('+')) {
        n = make(Node::Op::add, n, product());
      } else if (accept('-')) {
        n = make(Node::Op::sub, n, product());
      } else {
        return n;
      }
    }
  }
  NodePtr product() {
    NodePtr n = unary();
    while (true) {
      if (accept('*')) {
        n = make(Node::Op::mul, n, unary());
      } else if (accept('/')) {
        n = make(Node::Op::div, n, unary());
      } else {
        return n;
      }
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Node::Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Op::pow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr n = sum();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
      if (ec != std::errc()) fail("invalid number");
      pos_ = static_cast<std::size_t>(ptr - s_.data());
      return make(Node::Op::number, nullptr, nullptr, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "x") return make(Node::Op::var_x);
      if (id == "y") return make(Node::Op::var_y);
      if (id == "t") {
        uses_t = true;
        return make(Node::Op::var_t);
      }
      if (id == "pi") return make(Node::Op::number, nullptr, nullptr, std::numbers::pi);
      if (id == "sin" || id == "cos") {
        if (!accept('(')) fail("expected '(' after " + id);
        NodePtr arg = sum();
        if (!accept(')')) fail("expected ')'");
        return make(id == "sin" ? Node::Op::sin : Node::Op::cos, arg);
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected character");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  ExprParser p(text);
  Expression e;
  e.root_ = p.parse();
  e.text_ = text;
  e.uses_t_ = p.uses_t;
  return e;
}

Expression Expression::constant(double value) {
  Expression e;
  e.root_ = make(Node::Op::number, nullptr, nullptr, value);
  e.text_ = std::to_string(value);
  return e;
}

double Expression::operator()(double x, double y, double t) const { return root_->eval(x, y, t); }

}  // namespace tgsm
