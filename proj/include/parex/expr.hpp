#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace parex {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
  std::size_t position;
};

// Arithmetic expression in the variables x and t. Grammar: + - * / ^ (right
// associative), unary minus, parentheses, sin cos exp ln, the constant pi,
// and decimal literals. Copyable; evaluation is thread safe.
class Expression {
 public:
  static Expression parse(const std::string& src);

  double operator()(double x, double t) const;

  const std::string& source() const { return src_; }

  struct Node;  // AST node, defined in expr.cpp

 private:
  std::shared_ptr<const Node> root_;
  std::string src_;
};

}  // namespace parex
