#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace maslov {

/// Arithmetic in one variable x: numbers, x, pi, + - * / ^, unary minus,
/// sin cos exp sqrt, parentheses. ^ is right-associative and a leading minus
/// belongs to the base, so -2^2 = 4.
class Expression {
 public:
  struct Node;

  Expression() = default;

  double operator()(double x) const;
  const std::string& source() const noexcept { return source_; }

  friend Expression parse_expression(std::string_view src);

 private:
  Expression(std::shared_ptr<const Node> root, std::string source)
      : root_(std::move(root)), source_(std::move(source)) {}

  std::shared_ptr<const Node> root_;
  std::string source_;
};

/// Throws SyntaxError with the byte offset of the first problem.
Expression parse_expression(std::string_view src);

}  // namespace maslov
