#pragma once

// Arithmetic expression language for field specifications.
//
// Grammar (whitespace insignificant):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | constant | variable | func '(' expr (',' expr)* ')' | '(' expr ')'
// Constants: pi, e. Functions: sin cos tan exp ln sqrt atan atan2 abs.
// The set of admissible variable names is fixed at parse time.

#include <array>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace finsler2d {

enum class Op {
  Constant,
  Variable,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Sin,
  Cos,
  Tan,
  Exp,
  Ln,
  Sqrt,
  Atan,
  Atan2,
  Abs,
};

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  Op op = Op::Constant;
  double value = 0.0;  // Constant
  int var = -1;        // Variable: index into the variable list
  NodePtr lhs, rhs;    // operands (rhs only for binary ops and atan2)
};

// Immutable expression tree. Copies share structure.
class Expression {
 public:
  Expression();  // the constant 0
  explicit Expression(NodePtr root, std::vector<std::string> variables);

  static Expression constant(double v, std::vector<std::string> variables);

  double evaluate(std::span<const double> values) const;
  double operator()(double x1, double x2) const {
    const double v[2] = {x1, x2};
    return evaluate(v);
  }

  bool is_constant() const;
  // Value of a constant expression; meaningful only when is_constant().
  double constant_value() const;

  const NodePtr& root() const { return root_; }
  const std::vector<std::string>& variables() const { return variables_; }
  std::size_t node_count() const;

 private:
  NodePtr root_;
  std::vector<std::string> variables_;
};

inline const std::vector<std::string>& field_variables() {
  static const std::vector<std::string> vars{"x1", "x2"};
  return vars;
}

Expression parse_expression(std::string_view src,
                            const std::vector<std::string>& variables = field_variables());

// Symbolic partial derivative with respect to variable `axis` (0-based), constant folded.
Expression diff_expression(const Expression& e, int axis);

// Text form that parses back to an equivalent tree.
std::string print_expression(const Expression& e);

}  // namespace finsler2d
