#ifndef CFDE_EXPR_HPP
#define CFDE_EXPR_HPP

// Scalar expressions in the single variable t.
//
// Grammar (lowest to highest precedence):
//
//   expr    := term  (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | 't' | 'pi' | 'e' | func '(' expr ')'
//            | 'pow' '(' expr ',' expr ')' | '(' expr ')'
//
// so "-t^2" is -(t^2), "2^3^2" is 2^(3^2) and "sin(t)^2" is (sin t)^2.
// There is no implicit multiplication: "2t" is rejected.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfde/errors.hpp"

namespace cfde {

enum class Op
{
  none,
  // unary
  neg,
  sin,
  cos,
  tan,
  exp,
  ln,
  sqrt,
  abs,
  // binary
  add,
  sub,
  mul,
  div,
  pow,
};

struct ExprNode
{
  enum class Kind
  {
    constant,
    variable,
    unary,
    binary
  };

  Kind kind = Kind::constant;
  Op op = Op::none;
  double value = 0.0;
  int lhs = -1;
  int rhs = -1;
};

namespace detail {

inline const char* op_symbol(Op op)
{
  switch (op) {
    case Op::neg: return "neg";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::tan: return "tan";
    case Op::exp: return "exp";
    case Op::ln: return "ln";
    case Op::sqrt: return "sqrt";
    case Op::abs: return "abs";
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    case Op::pow: return "^";
    case Op::none: break;
  }
  return "?";
}

inline double checked(double v, const char* what)
{
  if (!std::isfinite(v))
    throw DomainError(std::string("non-finite result in ") + what);
  return v;
}

} // namespace detail

/// Immutable expression tree. Copies share the node storage.
class Expr
{
public:
  /// The constant zero.
  Expr() : Expr(make_constant(0.0)) {}

  static Expr constant(double value) { return make_constant(value); }

  static Expr variable()
  {
    ExprNode n;
    n.kind = ExprNode::Kind::variable;
    return Expr(std::make_shared<const std::vector<ExprNode>>(std::vector<ExprNode>{n}), 0, "t");
  }

  /// Parses `source`; throws ParseError on malformed input.
  static Expr parse(std::string_view source);

  /// Evaluates at `t`. Throws DomainError instead of returning NaN or inf.
  double eval(double t) const { return eval_node(root_, t); }
  double operator()(double t) const { return eval(t); }

  const ExprNode& root() const { return (*nodes_)[root_]; }
  const ExprNode& node(int index) const { return (*nodes_).at(index); }

  /// Fully parenthesised prefix form, e.g. "(+ (* 2 t) 1)".
  std::string to_string() const
  {
    std::ostringstream out;
    out.precision(17);
    write(out, root_);
    return out.str();
  }

  /// Text the expression was parsed from (or a synthesised equivalent).
  const std::string& source() const { return source_; }

  /// True for a literal zero constant. Used to tell homogeneous problems apart.
  bool is_zero() const
  {
    const auto& r = root();
    return r.kind == ExprNode::Kind::constant && r.value == 0.0;
  }

private:
  Expr(std::shared_ptr<const std::vector<ExprNode>> nodes, int root, std::string source)
    : nodes_(std::move(nodes))
    , root_(root)
    , source_(std::move(source))
  {}

  static Expr make_constant(double value)
  {
    ExprNode n;
    n.value = value;
    std::ostringstream s;
    s.precision(17);
    s << value;
    return Expr(std::make_shared<const std::vector<ExprNode>>(std::vector<ExprNode>{n}), 0, s.str());
  }

  double eval_node(int index, double t) const
  {
    const ExprNode& n = (*nodes_)[index];
    switch (n.kind) {
      case ExprNode::Kind::constant: return n.value;
      case ExprNode::Kind::variable: return t;
      case ExprNode::Kind::unary: {
        const double x = eval_node(n.lhs, t);
        switch (n.op) {
          case Op::neg: return -x;
          case Op::sin: return detail::checked(std::sin(x), "sin");
          case Op::cos: return detail::checked(std::cos(x), "cos");
          case Op::tan: return detail::checked(std::tan(x), "tan");
          case Op::exp: return detail::checked(std::exp(x), "exp");
          case Op::ln:
            if (!(x > 0.0))
              throw DomainError("ln of non-positive argument");
            return std::log(x);
          case Op::sqrt:
            if (x < 0.0)
              throw DomainError("sqrt of negative argument");
            return std::sqrt(x);
          case Op::abs: return std::abs(x);
          default: break;
        }
        break;
      }
      case ExprNode::Kind::binary: {
        const double a = eval_node(n.lhs, t);
        const double b = eval_node(n.rhs, t);
        switch (n.op) {
          case Op::add: return detail::checked(a + b, "+");
          case Op::sub: return detail::checked(a - b, "-");
          case Op::mul: return detail::checked(a * b, "*");
          case Op::div:
            if (b == 0.0)
              throw DomainError("division by zero");
            return detail::checked(a / b, "/");
          case Op::pow:
            if (a == 0.0 && b < 0.0)
              throw DomainError("zero raised to a negative power");
            return detail::checked(std::pow(a, b), "^");
          default: break;
        }
        break;
      }
    }
    throw DomainError("corrupt expression node");
  }

  void write(std::ostream& out, int index) const
  {
    const ExprNode& n = (*nodes_)[index];
    switch (n.kind) {
      case ExprNode::Kind::constant: out << n.value; return;
      case ExprNode::Kind::variable: out << 't'; return;
      case ExprNode::Kind::unary:
        out << '(' << detail::op_symbol(n.op) << ' ';
        write(out, n.lhs);
        out << ')';
        return;
      case ExprNode::Kind::binary:
        out << '(' << detail::op_symbol(n.op) << ' ';
        write(out, n.lhs);
        out << ' ';
        write(out, n.rhs);
        out << ')';
        return;
    }
  }

  friend class ExprParser;

  std::shared_ptr<const std::vector<ExprNode>> nodes_;
  int root_ = 0;
  std::string source_;
};

class ExprParser
{
public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  Expr run()
  {
    skip_space();
    if (pos_ >= src_.size())
      throw ParseError(pos_, "empty expression");
    const int root = parse_expr();
    skip_space();
    if (pos_ < src_.size()) {
      if (src_[pos_] == ')')
        throw ParseError(pos_, "unbalanced ')'");
      throw ParseError(pos_, std::string("unexpected '") + src_[pos_] + "'");
    }
    return Expr(std::make_shared<const std::vector<ExprNode>>(std::move(nodes_)), root, std::string(src_));
  }

private:
  int push(ExprNode n)
  {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int constant(double v)
  {
    ExprNode n;
    n.value = v;
    return push(n);
  }

  int unary(Op op, int child)
  {
    ExprNode n;
    n.kind = ExprNode::Kind::unary;
    n.op = op;
    n.lhs = child;
    return push(n);
  }

  int binary(Op op, int lhs, int rhs)
  {
    ExprNode n;
    n.kind = ExprNode::Kind::binary;
    n.op = op;
    n.lhs = lhs;
    n.rhs = rhs;
    return push(n);
  }

  void skip_space()
  {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool accept(char c)
  {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what)
  {
    if (!accept(c))
      throw ParseError(pos_, what);
  }

  int parse_expr()
  {
    int lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = binary(Op::add, lhs, parse_term());
      else if (accept('-'))
        lhs = binary(Op::sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  int parse_term()
  {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = binary(Op::mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = binary(Op::div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  int parse_unary()
  {
    if (accept('-'))
      return unary(Op::neg, parse_unary());
    if (accept('+'))
      return parse_unary();
    return parse_power();
  }

  int parse_power()
  {
    const int base = parse_primary();
    if (accept('^'))
      return binary(Op::pow, base, parse_unary());
    return base;
  }

  int parse_primary()
  {
    skip_space();
    if (pos_ >= src_.size())
      throw ParseError(pos_, "expected operand");

    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      const std::string_view name = src_.substr(start, pos_ - start);

      if (name == "t") {
        ExprNode n;
        n.kind = ExprNode::Kind::variable;
        return push(n);
      }
      if (name == "pi")
        return constant(std::numbers::pi);
      if (name == "e")
        return constant(std::numbers::e);

      const Op op = function_op(name);
      if (op == Op::none)
        throw ParseError(start, "unknown identifier '" + std::string(name) + "'");

      expect('(', "expected '(' after function name");
      const int arg = parse_expr();
      if (op == Op::pow) {
        expect(',', "pow takes two arguments");
        const int exponent = parse_expr();
        expect(')', "unbalanced '(': expected ')'");
        return binary(Op::pow, arg, exponent);
      }
      expect(')', "unbalanced '(': expected ')'");
      return unary(op, arg);
    }

    if (c == '(') {
      ++pos_;
      const int inner = parse_expr();
      expect(')', "unbalanced '(': expected ')'");
      return inner;
    }

    if (c == ')')
      throw ParseError(pos_, "unbalanced ')'");
    throw ParseError(pos_, std::string("expected operand, found '") + c + "'");
  }

  int parse_number()
  {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };

    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0)
      throw ParseError(start, "malformed number");

    // Exponent only when followed by digits, so "2e" stays an error rather
    // than silently swallowing the constant e.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-'))
        ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }

    const std::string text(src_.substr(start, pos_ - start));
    return constant(std::strtod(text.c_str(), nullptr));
  }

  static Op function_op(std::string_view name)
  {
    if (name == "sin") return Op::sin;
    if (name == "cos") return Op::cos;
    if (name == "tan") return Op::tan;
    if (name == "exp") return Op::exp;
    if (name == "ln") return Op::ln;
    if (name == "sqrt") return Op::sqrt;
    if (name == "abs") return Op::abs;
    if (name == "pow") return Op::pow;
    return Op::none;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<ExprNode> nodes_;
};

inline Expr Expr::parse(std::string_view source)
{
  return ExprParser(source).run();
}

/// Convenience free functions mirroring the member API.
inline Expr parse(std::string_view source) { return Expr::parse(source); }
inline double eval(const Expr& e, double t) { return e.eval(t); }

} // namespace cfde

#endif // CFDE_EXPR_HPP
