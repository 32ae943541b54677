#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace relcont {

// parse/eval error with a 1-based source position; the message carries the
// "line:column: " prefix already formatted
struct ExprError : std::runtime_error {
  std::size_t line;
  std::size_t column;
  ExprError(const std::string& msg, std::size_t line, std::size_t column);
};

struct ExprNode;

// immutable arithmetic expression: reals, named variables, + - * / ^ with the
// usual precedence (^ right-associative, binding tighter than unary minus),
// and the functions sin cos exp log sqrt tanh abs min max
class Expression {
 public:
  Expression();  // constant 0
  explicit Expression(std::shared_ptr<const ExprNode> root);

  static Expression constant(double v);
  static Expression variable(const std::string& name);

  double eval(const std::map<std::string, double>& env) const;
  Expression derivative(const std::string& var) const;
  std::string print() const;
  std::set<std::string> variables() const;
  // throws ExprError at the offending variable if one is not in the list
  void check_variables(const std::set<std::string>& allowed) const;
  bool is_constant() const;  // no free variables

  const std::shared_ptr<const ExprNode>& root() const { return root_; }

 private:
  std::shared_ptr<const ExprNode> root_;
};

Expression parse_expression(const std::string& text);
Expression parse_expression(const std::string& text,
                            const std::set<std::string>& allowed_vars);

// variable lookup resolved once against a fixed name list; eval then takes
// the values in that order (used for per-point field evaluation)
class BoundExpression {
 public:
  BoundExpression() = default;
  BoundExpression(const Expression& e, const std::vector<std::string>& names);
  double eval(const double* values) const;

 private:
  std::shared_ptr<const ExprNode> root_;
  std::vector<std::string> names_;
};

}  // namespace relcont
