#include "finsler2d/expression.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "finsler2d/errors.hpp"

namespace finsler2d {

namespace {

NodePtr make_const(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Constant;
  n->value = v;
  return n;
}

NodePtr make_var(int index) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Variable;
  n->var = index;
  return n;
}

bool is_const(const NodePtr& n) { return n->op == Op::Constant; }
bool is_const(const NodePtr& n, double v) { return n->op == Op::Constant && n->value == v; }

double apply_unary(Op op, double a);
double apply_binary(Op op, double a, double b);

NodePtr make_node(Op op, NodePtr lhs, NodePtr rhs = nullptr) {
  // Constant folding; only folds when the result is finite so domain errors
  // still surface at evaluation time.
  if (is_const(lhs) && (!rhs || is_const(rhs))) {
    try {
      const double v = rhs ? apply_binary(op, lhs->value, rhs->value) : apply_unary(op, lhs->value);
      if (std::isfinite(v)) return make_const(v);
    } catch (const EvalError&) {
    }
  }
  switch (op) {
    case Op::Add:
      if (is_const(lhs, 0.0)) return rhs;
      if (is_const(rhs, 0.0)) return lhs;
      break;
    case Op::Sub:
      if (is_const(rhs, 0.0)) return lhs;
      if (is_const(lhs, 0.0)) return make_node(Op::Neg, rhs);
      break;
    case Op::Mul:
      if (is_const(lhs, 0.0) || is_const(rhs, 0.0)) return make_const(0.0);
      if (is_const(lhs, 1.0)) return rhs;
      if (is_const(rhs, 1.0)) return lhs;
      break;
    case Op::Div:
      if (is_const(lhs, 0.0)) return make_const(0.0);
      if (is_const(rhs, 1.0)) return lhs;
      break;
    case Op::Pow:
      if (is_const(rhs, 1.0)) return lhs;
      if (is_const(rhs, 0.0)) return make_const(1.0);
      break;
    case Op::Neg:
      if (lhs->op == Op::Neg) return lhs->lhs;
      break;
    default:
      break;
  }
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

double apply_unary(Op op, double a) {
  switch (op) {
    case Op::Neg:
      return -a;
    case Op::Sin:
      return std::sin(a);
    case Op::Cos:
      return std::cos(a);
    case Op::Tan:
      return std::tan(a);
    case Op::Exp:
      return std::exp(a);
    case Op::Ln:
      if (!(a > 0.0)) throw EvalError("ln of non-positive argument");
      return std::log(a);
    case Op::Sqrt:
      if (!(a > 0.0)) throw EvalError("sqrt of non-positive argument");
      return std::sqrt(a);
    case Op::Atan:
      return std::atan(a);
    case Op::Abs:
      return std::abs(a);
    default:
      throw EvalError("not a unary operator");
  }
}

double apply_binary(Op op, double a, double b) {
  switch (op) {
    case Op::Add:
      return a + b;
    case Op::Sub:
      return a - b;
    case Op::Mul:
      return a * b;
    case Op::Div:
      if (b == 0.0) throw EvalError("division by zero");
      return a / b;
    case Op::Pow: {
      if (a < 0.0 && std::nearbyint(b) != b) throw EvalError("non-integer power of negative base");
      if (a == 0.0 && b < 0.0) throw EvalError("negative power of zero");
      return std::pow(a, b);
    }
    case Op::Atan2:
      if (a == 0.0 && b == 0.0) throw EvalError("atan2(0, 0)");
      return std::atan2(a, b);
    default:
      throw EvalError("not a binary operator");
  }
}

double eval_node(const ExprNode& n, std::span<const double> vals) {
  switch (n.op) {
    case Op::Constant:
      return n.value;
    case Op::Variable:
      return vals[static_cast<std::size_t>(n.var)];
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
    case Op::Atan2:
      return apply_binary(n.op, eval_node(*n.lhs, vals), eval_node(*n.rhs, vals));
    default:
      return apply_unary(n.op, eval_node(*n.lhs, vals));
  }
}

std::size_t count_nodes(const ExprNode& n) {
  std::size_t c = 1;
  if (n.lhs) c += count_nodes(*n.lhs);
  if (n.rhs) c += count_nodes(*n.rhs);
  return c;
}

// ---------------------------------------------------------------------------
// Parser

struct FunctionInfo {
  std::string_view name;
  Op op;
  int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", Op::Sin, 1},   {"cos", Op::Cos, 1},   {"tan", Op::Tan, 1},
    {"exp", Op::Exp, 1},   {"ln", Op::Ln, 1},     {"sqrt", Op::Sqrt, 1},
    {"atan", Op::Atan, 1}, {"atan2", Op::Atan2, 2}, {"abs", Op::Abs, 1},
};

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail({"operator", "end of input"});
    return e;
  }

 private:
  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r'))
      ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    const std::string found =
        pos_ < src_.size() ? std::string(1, src_[pos_]) : std::string("end of input");
    throw SyntaxError(pos_, std::move(expected), found);
  }

  void expect(char c) {
    if (peek() != c) fail({std::string(1, c)});
    ++pos_;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      NodePtr rhs = term();
      lhs = make_node(c == '+' ? Op::Add : Op::Sub, lhs, rhs);
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      const char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      NodePtr rhs = unary();
      lhs = make_node(c == '*' ? Op::Mul : Op::Div, lhs, rhs);
    }
  }

  NodePtr unary() {
    if (peek() == '-') {
      ++pos_;
      return make_node(Op::Neg, unary());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (peek() == '^') {
      ++pos_;
      NodePtr exponent = unary();
      return make_node(Op::Pow, base, exponent);
    }
    return base;
  }

  NodePtr primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail({"number", "identifier", "(", "-"});
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto* first = src_.data() + start;
    const auto* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail({"number"});
    }
    return make_const(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    for (const auto& f : kFunctions) {
      if (f.name != name) continue;
      if (peek() != '(') fail({"("});
      ++pos_;
      NodePtr a = expr();
      NodePtr b;
      if (f.arity == 2) {
        if (peek() != ',') fail({","});
        ++pos_;
        b = expr();
      }
      if (peek() != ')') fail(f.arity == 2 ? std::vector<std::string>{")"}
                                           : std::vector<std::string>{")"});
      ++pos_;
      return make_node(f.op, a, b);
    }
    if (name == "pi") return make_const(std::numbers::pi);
    if (name == "e") return make_const(std::numbers::e);
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return make_var(static_cast<int>(i));
    throw UnknownIdentifier(std::string(name), start);
  }
};

// ---------------------------------------------------------------------------
// Differentiation

NodePtr d(const NodePtr& n, int axis) {
  const NodePtr& a = n->lhs;
  const NodePtr& b = n->rhs;
  switch (n->op) {
    case Op::Constant:
      return make_const(0.0);
    case Op::Variable:
      return make_const(n->var == axis ? 1.0 : 0.0);
    case Op::Neg:
      return make_node(Op::Neg, d(a, axis));
    case Op::Add:
      return make_node(Op::Add, d(a, axis), d(b, axis));
    case Op::Sub:
      return make_node(Op::Sub, d(a, axis), d(b, axis));
    case Op::Mul:
      return make_node(Op::Add, make_node(Op::Mul, d(a, axis), b), make_node(Op::Mul, a, d(b, axis)));
    case Op::Div: {
      // (a' b - a b') / b^2
      NodePtr num = make_node(Op::Sub, make_node(Op::Mul, d(a, axis), b), make_node(Op::Mul, a, d(b, axis)));
      return make_node(Op::Div, num, make_node(Op::Pow, b, make_const(2.0)));
    }
    case Op::Pow: {
      NodePtr db = d(b, axis);
      if (is_const(db, 0.0)) {
        // b a^(b-1) a'
        NodePtr k = make_node(Op::Mul, b, make_node(Op::Pow, a, make_node(Op::Sub, b, make_const(1.0))));
        return make_node(Op::Mul, k, d(a, axis));
      }
      // a^b (b' ln a + b a'/a)
      NodePtr inner = make_node(Op::Add, make_node(Op::Mul, db, make_node(Op::Ln, a)),
                                make_node(Op::Div, make_node(Op::Mul, b, d(a, axis)), a));
      return make_node(Op::Mul, n, inner);
    }
    case Op::Sin:
      return make_node(Op::Mul, make_node(Op::Cos, a), d(a, axis));
    case Op::Cos:
      return make_node(Op::Neg, make_node(Op::Mul, make_node(Op::Sin, a), d(a, axis)));
    case Op::Tan:
      return make_node(Op::Mul, make_node(Op::Add, make_const(1.0), make_node(Op::Pow, n, make_const(2.0))),
                       d(a, axis));
    case Op::Exp:
      return make_node(Op::Mul, n, d(a, axis));
    case Op::Ln:
      return make_node(Op::Div, d(a, axis), a);
    case Op::Sqrt:
      return make_node(Op::Div, d(a, axis), make_node(Op::Mul, make_const(2.0), n));
    case Op::Atan:
      return make_node(Op::Div, d(a, axis),
                       make_node(Op::Add, make_const(1.0), make_node(Op::Pow, a, make_const(2.0))));
    case Op::Atan2: {
      // atan2(a, b): (b a' - a b') / (a^2 + b^2)
      NodePtr num = make_node(Op::Sub, make_node(Op::Mul, b, d(a, axis)), make_node(Op::Mul, a, d(b, axis)));
      NodePtr den = make_node(Op::Add, make_node(Op::Pow, a, make_const(2.0)),
                              make_node(Op::Pow, b, make_const(2.0)));
      return make_node(Op::Div, num, den);
    }
    case Op::Abs:
      return make_node(Op::Mul, make_node(Op::Div, a, n), d(a, axis));
  }
  return make_const(0.0);
}

// ---------------------------------------------------------------------------
// Printing

int precedence(const ExprNode& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    case Op::Constant:
      return n.value < 0.0 ? 0 : 5;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string print_node(const ExprNode& n, const std::vector<std::string>& vars);

std::string wrap(const ExprNode& n, int min_prec, const std::vector<std::string>& vars) {
  std::string s = print_node(n, vars);
  return precedence(n) < min_prec ? "(" + s + ")" : s;
}

std::string print_node(const ExprNode& n, const std::vector<std::string>& vars) {
  switch (n.op) {
    case Op::Constant:
      return format_number(n.value);
    case Op::Variable:
      return vars[static_cast<std::size_t>(n.var)];
    case Op::Neg:
      return "-" + wrap(*n.lhs, 4, vars);
    case Op::Add:
      return wrap(*n.lhs, 1, vars) + " + " + wrap(*n.rhs, 2, vars);
    case Op::Sub:
      return wrap(*n.lhs, 1, vars) + " - " + wrap(*n.rhs, 2, vars);
    case Op::Mul:
      return wrap(*n.lhs, 2, vars) + " * " + wrap(*n.rhs, 3, vars);
    case Op::Div:
      return wrap(*n.lhs, 2, vars) + " / " + wrap(*n.rhs, 3, vars);
    case Op::Pow:
      return wrap(*n.lhs, 5, vars) + "^" + wrap(*n.rhs, 4, vars);
    case Op::Atan2:
      return "atan2(" + print_node(*n.lhs, vars) + ", " + print_node(*n.rhs, vars) + ")";
    default:
      for (const auto& f : kFunctions)
        if (f.op == n.op) return std::string(f.name) + "(" + print_node(*n.lhs, vars) + ")";
      return "?";
  }
}

}  // namespace

Expression::Expression() : root_(make_const(0.0)) {}

Expression::Expression(NodePtr root, std::vector<std::string> variables)
    : root_(std::move(root)), variables_(std::move(variables)) {}

Expression Expression::constant(double v, std::vector<std::string> variables) {
  return Expression(make_const(v), std::move(variables));
}

double Expression::evaluate(std::span<const double> values) const {
  if (values.size() < variables_.size()) throw EvalError("too few variable values");
  const double v = eval_node(*root_, values);
  if (!std::isfinite(v)) throw EvalError("non-finite result");
  return v;
}

bool Expression::is_constant() const { return root_->op == Op::Constant; }
double Expression::constant_value() const { return root_->value; }
std::size_t Expression::node_count() const { return count_nodes(*root_); }

Expression parse_expression(std::string_view src, const std::vector<std::string>& variables) {
  Parser p(src, variables);
  return Expression(p.parse(), variables);
}

Expression diff_expression(const Expression& e, int axis) {
  if (axis < 0 || axis >= static_cast<int>(e.variables().size()))
    throw std::out_of_range("differentiation axis out of range");
  return Expression(d(e.root(), axis), e.variables());
}

std::string print_expression(const Expression& e) { return print_node(*e.root(), e.variables()); }

}  // namespace finsler2d
