#pragma once

#include <memory>
#include <string>

namespace vh {

/// Parsed arithmetic expression in one variable t (radians).
///
/// Grammar, standard precedence:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*      juxtaposition multiplies: 3t, 2cos(t)
///   unary   := ('+' | '-') unary | primary
///   primary := number | 't' | 'pi' | ('sin' | 'cos') '(' expr ')' | '(' expr ')'
class Expression {
 public:
  struct Node;

  /// Throws ValidationError with the offending position on syntax errors.
  static Expression parse(const std::string& text);

  double operator()(double t) const;
  /// Symbolic derivative with respect to t.
  Expression derivative() const;
  std::string to_string() const;

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace vh
