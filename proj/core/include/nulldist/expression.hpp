#pragma once

#include <memory>
#include <string>

namespace nulldist {

/// Scalar expression in the single variable t.
///
/// Grammar: numbers, t, pi, e, + - * / ^ (right associative), unary minus,
/// comparisons < <= > >= (yielding 1 or 0), min(a,b,...), max(a,b,...),
/// piecewise(c1, v1, c2, v2, ..., fallback), sin, cos, tan, exp, log, sqrt, abs, tanh.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double operator()(double t) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  Expression(std::string text, std::shared_ptr<const Node> root)
      : text_(std::move(text)), root_(std::move(root)) {}
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace nulldist
