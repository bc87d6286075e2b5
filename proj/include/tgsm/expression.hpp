#pragma once

// Arithmetic expressions in x, y, t for initial fields and loads.
// Grammar: numbers, x y t pi, + - * / ^ (right associative), unary minus,
// parentheses, sin(...) and cos(...).

#include <memory>
#include <string>

namespace tgsm {

class Expression {
 public:
  /// Throws ParseError (line 1, column of the offending character).
  static Expression parse(const std::string& text);
  static Expression constant(double value);

  double operator()(double x, double y, double t) const;
  const std::string& text() const { return text_; }
  /// True when the expression does not reference t.
  bool time_independent() const { return !uses_t_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  bool uses_t_ = false;
};

}  // namespace tgsm
