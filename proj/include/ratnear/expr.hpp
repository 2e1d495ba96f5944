#pragma once

#include "ratnear/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ratnear {

enum class ExprKind : std::uint8_t {
  Constant,
  Variable,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Pow,  // base ^ rational constant
  Exp,
  Sin,
  Cos,
};

/// Immutable expression DAG over rational constants and variables x1..xn.
/// Nodes are shared; copying an Expr is cheap. Builders fold constants and
/// drop neutral elements so derivative trees stay small.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(const Rational& value);
  /// Zero-based variable index (x1 is index 0).
  static Expr variable(int index);

  ExprKind kind() const noexcept;
  bool is_constant() const noexcept { return kind() == ExprKind::Constant; }
  bool is_zero() const;
  bool is_one() const;

  /// Value of a Constant node, or the exponent of a Pow node.
  const Rational& rational() const;
  int variable_index() const;
  std::size_t arity() const noexcept;  // number of operands (0, 1 or 2)
  const Expr& operand(std::size_t i) const;

  const void* identity() const noexcept { return node_.get(); }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, const Rational& exponent);
  friend Expr exp(const Expr& a);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(ExprKind kind, std::vector<Expr> operands, Rational value = 0, int index = -1);

  std::shared_ptr<const Node> node_;
};

Expr derivative(const Expr& e, int variable);

/// Highest variable index referenced, or -1 for a constant expression.
int max_variable_index(const Expr& e);

/// Re-parseable textual form in the manifold-file grammar.
std::string to_string(const Expr& e);

/// Grammar:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' unary)?          exponent must fold to a rational
///   primary := number | 'x'<i> | func '(' expr ')' | '(' expr ')'
///   func    := 'exp' | 'sin' | 'cos'
/// Numbers are integer or decimal literals, read exactly. Variables run
/// x1..x<arity>.
Expr parse_expression(std::string_view text, int arity);

/// Exact evaluation; throws NonPolynomialError when the expression needs
/// exp/sin/cos or a non-integer power, DomainError on division by zero.
Rational evaluate_exact(const Expr& e, std::span<const Rational> x);

using Monomial = std::vector<int>;

/// Sparse multivariate polynomial with exact rational coefficients.
class Polynomial {
 public:
  explicit Polynomial(int arity = 0) : arity_(arity) {}

  static Polynomial constant(int arity, const Rational& c);
  static Polynomial variable(int arity, int index);

  int arity() const noexcept { return arity_; }
  int degree() const;  // total degree; 0 for constants and the zero polynomial
  int degree_in(int variable) const;
  bool is_zero() const noexcept { return terms_.empty(); }
  const std::map<Monomial, Rational>& terms() const noexcept { return terms_; }

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const Rational& c) const;
  Polynomial power(unsigned exponent) const;

  Rational evaluate(std::span<const Rational> x) const;
  double evaluate(std::span<const double> x) const;

  /// Least common multiple of the coefficient denominators (1 for zero).
  BigInt denominator_lcm() const;

 private:
  void add_term(const Monomial& m, const Rational& c);
  int arity_;
  std::map<Monomial, Rational> terms_;
};

/// Expands an expression into a polynomial if it is one: only + - * / by
/// constants and non-negative integer powers of polynomial subexpressions.
std::optional<Polynomial> to_polynomial(const Expr& e, int arity);

/// Postfix program for fast, reentrant double evaluation.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  CompiledExpr(const Expr& e, int arity);

  /// Throws DomainError on division by zero.
  double operator()(const double* x) const;
  int arity() const noexcept { return arity_; }

 private:
  enum class Op : std::uint8_t { Const, Var, Add, Sub, Mul, Div, Neg, PowInt, PowReal, Exp, Sin, Cos };
  struct Instr {
    Op op;
    std::int32_t index;  // variable index, or integer exponent
    double value;        // constant, or real exponent
  };
  void emit(const Expr& e, int depth);

  std::vector<Instr> code_;
  int arity_ = 0;
  int max_stack_ = 0;
};

}  // namespace ratnear
