#include "ratnear/expr.hpp"

#include "ratnear/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

namespace ratnear {

struct Expr::Node {
  ExprKind kind;
  std::vector<Expr> operands;
  Rational value;  // Constant value or Pow exponent
  int index = -1;  // Variable index
};

namespace {

bool is_integer(const Rational& r) { return boost::multiprecision::denominator(r) == 1; }

Rational rational_power(const Rational& base, const BigInt& exponent) {
  if (exponent < 0) {
    if (base == 0) throw DomainError("zero raised to a negative power");
    return Rational(1) / rational_power(base, -exponent);
  }
  Rational result = 1;
  Rational b = base;
  BigInt e = exponent;
  while (e > 0) {
    if ((e & 1) != 0) result *= b;
    e >>= 1;
    if (e > 0) b *= b;
  }
  return result;
}

}  // namespace

Expr::Expr() : Expr(constant(0)) {}

Expr Expr::make(ExprKind kind, std::vector<Expr> operands, Rational value, int index) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->operands = std::move(operands);
  node->value = std::move(value);
  node->index = index;
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr Expr::constant(const Rational& value) { return make(ExprKind::Constant, {}, value); }

Expr Expr::variable(int index) {
  if (index < 0) throw DomainError("negative variable index");
  return make(ExprKind::Variable, {}, 0, index);
}

ExprKind Expr::kind() const noexcept { return node_->kind; }
bool Expr::is_zero() const { return is_constant() && node_->value == 0; }
bool Expr::is_one() const { return is_constant() && node_->value == 1; }
const Rational& Expr::rational() const { return node_->value; }
int Expr::variable_index() const { return node_->index; }
std::size_t Expr::arity() const noexcept { return node_->operands.size(); }
const Expr& Expr::operand(std::size_t i) const { return node_->operands.at(i); }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.rational() + b.rational());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (b.kind() == ExprKind::Neg) return a - b.operand(0);
  return Expr::make(ExprKind::Add, {a, b});
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.rational() - b.rational());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (b.kind() == ExprKind::Neg) return a + b.operand(0);
  return Expr::make(ExprKind::Sub, {a, b});
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.rational() * b.rational());
  if (a.is_zero() || b.is_zero()) return Expr::constant(0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_constant() && a.rational() == -1) return -b;
  if (b.is_constant() && b.rational() == -1) return -a;
  if (a.kind() == ExprKind::Neg) return -(a.operand(0) * b);
  if (b.kind() == ExprKind::Neg) return -(a * b.operand(0));
  // keep constants on the left so printing reads "1/2*x1"
  if (b.is_constant()) return Expr::make(ExprKind::Mul, {b, a});
  return Expr::make(ExprKind::Mul, {a, b});
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_constant() && b.rational() == 0) throw DomainError("division by zero in expression");
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.rational() / b.rational());
  if (a.is_zero()) return Expr::constant(0);
  if (b.is_one()) return a;
  if (b.is_constant()) return Expr::constant(Rational(1) / b.rational()) * a;
  return Expr::make(ExprKind::Div, {a, b});
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.rational());
  if (a.kind() == ExprKind::Neg) return a.operand(0);
  return Expr::make(ExprKind::Neg, {a});
}

Expr pow(const Expr& base, const Rational& exponent) {
  if (exponent == 0) return Expr::constant(1);
  if (exponent == 1) return base;
  if (base.is_constant() && is_integer(exponent)) {
    return Expr::constant(rational_power(base.rational(), boost::multiprecision::numerator(exponent)));
  }
  if (base.is_zero() && exponent > 0) return Expr::constant(0);
  if (base.is_one()) return Expr::constant(1);
  if (base.kind() == ExprKind::Pow) return pow(base.operand(0), base.rational() * exponent);
  return Expr::make(ExprKind::Pow, {base}, exponent);
}

Expr exp(const Expr& a) {
  if (a.is_zero()) return Expr::constant(1);
  return Expr::make(ExprKind::Exp, {a});
}

Expr sin(const Expr& a) {
  if (a.is_zero()) return Expr::constant(0);
  return Expr::make(ExprKind::Sin, {a});
}

Expr cos(const Expr& a) {
  if (a.is_zero()) return Expr::constant(1);
  return Expr::make(ExprKind::Cos, {a});
}

Expr derivative(const Expr& e, int variable) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return Expr::constant(0);
    case ExprKind::Variable:
      return Expr::constant(e.variable_index() == variable ? 1 : 0);
    case ExprKind::Add:
      return derivative(e.operand(0), variable) + derivative(e.operand(1), variable);
    case ExprKind::Sub:
      return derivative(e.operand(0), variable) - derivative(e.operand(1), variable);
    case ExprKind::Mul: {
      const Expr& u = e.operand(0);
      const Expr& v = e.operand(1);
      return derivative(u, variable) * v + u * derivative(v, variable);
    }
    case ExprKind::Div: {
      const Expr& u = e.operand(0);
      const Expr& v = e.operand(1);
      const Expr du = derivative(u, variable);
      const Expr dv = derivative(v, variable);
      if (dv.is_zero()) return du / v;
      return (du * v - u * dv) / pow(v, 2);
    }
    case ExprKind::Neg:
      return -derivative(e.operand(0), variable);
    case ExprKind::Pow: {
      const Expr& u = e.operand(0);
      const Rational& c = e.rational();
      return Expr::constant(c) * pow(u, c - 1) * derivative(u, variable);
    }
    case ExprKind::Exp:
      return e * derivative(e.operand(0), variable);
    case ExprKind::Sin:
      return cos(e.operand(0)) * derivative(e.operand(0), variable);
    case ExprKind::Cos:
      return -(sin(e.operand(0)) * derivative(e.operand(0), variable));
  }
  throw NonDifferentiableError("unknown expression node");
}

int max_variable_index(const Expr& e) {
  if (e.kind() == ExprKind::Variable) return e.variable_index();
  int best = -1;
  for (std::size_t i = 0; i < e.arity(); ++i) best = std::max(best, max_variable_index(e.operand(i)));
  return best;
}

// ---------------------------------------------------------------------------
// printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 1;
    case ExprKind::Mul:
    case ExprKind::Div:
      return 2;
    case ExprKind::Neg:
      return 3;
    case ExprKind::Pow:
      return 4;
    case ExprKind::Constant:
      return is_integer(e.rational()) && e.rational() >= 0 ? 5 : 2;
    default:
      return 5;
  }
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, int min_precedence, std::string& out) {
  if (precedence(child) < min_precedence) {
    out += '(';
    print(child, out);
    out += ')';
  } else {
    print(child, out);
  }
}

void print(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case ExprKind::Constant:
      out += to_string(e.rational());
      return;
    case ExprKind::Variable:
      out += "x" + std::to_string(e.variable_index() + 1);
      return;
    case ExprKind::Add:
      print_child(e.operand(0), 1, out);
      out += " + ";
      print_child(e.operand(1), 1, out);
      return;
    case ExprKind::Sub:
      print_child(e.operand(0), 1, out);
      out += " - ";
      print_child(e.operand(1), 2, out);
      return;
    case ExprKind::Mul:
      print_child(e.operand(0), 2, out);
      out += "*";
      print_child(e.operand(1), 3, out);
      return;
    case ExprKind::Div:
      print_child(e.operand(0), 2, out);
      out += "/";
      print_child(e.operand(1), 3, out);
      return;
    case ExprKind::Neg:
      out += "-";
      print_child(e.operand(0), 3, out);
      return;
    case ExprKind::Pow:
      print_child(e.operand(0), 5, out);
      out += "^";
      if (is_integer(e.rational()) && e.rational() >= 0) {
        out += to_string(e.rational());
      } else {
        out += "(" + to_string(e.rational()) + ")";
      }
      return;
    case ExprKind::Exp:
      out += "exp(";
      print(e.operand(0), out);
      out += ")";
      return;
    case ExprKind::Sin:
      out += "sin(";
      print(e.operand(0), out);
      out += ")";
      return;
    case ExprKind::Cos:
      out += "cos(";
      print(e.operand(0), out);
      out += ")";
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, int arity) : text_(text), arity_(arity) {}

  Expr parse() {
    Expr e = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expression() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      const Expr exponent = unary();
      if (!exponent.is_constant()) fail("exponent must be a rational constant");
      return pow(base, exponent.rational());
    }
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    return Expr::constant(parse_rational(text_.substr(start, pos_ - start)));
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "exp" || name == "sin" || name == "cos") {
      if (!accept('(')) fail("expected '(' after " + std::string(name));
      Expr arg = expression();
      if (!accept(')')) fail("expected ')'");
      if (name == "exp") return exp(arg);
      if (name == "sin") return sin(arg);
      return cos(arg);
    }
    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      const int index = std::stoi(std::string(name.substr(1)));
      if (index < 1 || index > arity_) {
        pos_ = start;
        fail("variable " + std::string(name) + " outside x1..x" + std::to_string(arity_));
      }
      return Expr::variable(index - 1);
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  int arity_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view text, int arity) { return Parser(text, arity).parse(); }

// ---------------------------------------------------------------------------
// exact evaluation

Rational evaluate_exact(const Expr& e, std::span<const Rational> x) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return e.rational();
    case ExprKind::Variable:
      if (static_cast<std::size_t>(e.variable_index()) >= x.size()) throw DimensionError("variable index out of range");
      return x[static_cast<std::size_t>(e.variable_index())];
    case ExprKind::Add:
      return evaluate_exact(e.operand(0), x) + evaluate_exact(e.operand(1), x);
    case ExprKind::Sub:
      return evaluate_exact(e.operand(0), x) - evaluate_exact(e.operand(1), x);
    case ExprKind::Mul:
      return evaluate_exact(e.operand(0), x) * evaluate_exact(e.operand(1), x);
    case ExprKind::Div: {
      const Rational den = evaluate_exact(e.operand(1), x);
      if (den == 0) throw DomainError("division by zero in expression");
      return evaluate_exact(e.operand(0), x) / den;
    }
    case ExprKind::Neg:
      return -evaluate_exact(e.operand(0), x);
    case ExprKind::Pow:
      if (!is_integer(e.rational())) throw NonPolynomialError("non-integer power has no exact rational value");
      return rational_power(evaluate_exact(e.operand(0), x), boost::multiprecision::numerator(e.rational()));
    case ExprKind::Exp:
    case ExprKind::Sin:
    case ExprKind::Cos:
      throw NonPolynomialError("transcendental function has no exact rational value");
  }
  throw NonPolynomialError("unknown expression node");
}

// ---------------------------------------------------------------------------
// polynomials

Polynomial Polynomial::constant(int arity, const Rational& c) {
  Polynomial p(arity);
  p.add_term(Monomial(static_cast<std::size_t>(arity), 0), c);
  return p;
}

Polynomial Polynomial::variable(int arity, int index) {
  Polynomial p(arity);
  Monomial m(static_cast<std::size_t>(arity), 0);
  m.at(static_cast<std::size_t>(index)) = 1;
  p.add_term(m, 1);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    int total = 0;
    for (int e : m) total += e;
    d = std::max(d, total);
  }
  return d;
}

int Polynomial::degree_in(int variable) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.at(static_cast<std::size_t>(variable)));
  return d;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial result(a.arity_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m(ma.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      result.add_term(m, ca * cb);
    }
  }
  return result;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial result(arity_);
  for (const auto& [m, coeff] : terms_) result.add_term(m, coeff * c);
  return result;
}

Polynomial Polynomial::power(unsigned exponent) const {
  Polynomial result = constant(arity_, 1);
  Polynomial base = *this;
  while (exponent > 0) {
    if ((exponent & 1U) != 0) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

Rational Polynomial::evaluate(std::span<const Rational> x) const {
  if (x.size() != static_cast<std::size_t>(arity_)) throw DimensionError("polynomial evaluated at point of wrong dimension");
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (int k = 0; k < m[i]; ++k) term *= x[i];
    }
    sum += term;
  }
  return sum;
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(arity_)) throw DimensionError("polynomial evaluated at point of wrong dimension");
  double sum = 0;
  for (const auto& [m, c] : terms_) {
    double term = to_double(c);
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (int k = 0; k < m[i]; ++k) term *= x[i];
    }
    sum += term;
  }
  return sum;
}

BigInt Polynomial::denominator_lcm() const {
  BigInt l = 1;
  for (const auto& [m, c] : terms_) {
    const BigInt d = boost::multiprecision::denominator(c);
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  return l;
}

std::optional<Polynomial> to_polynomial(const Expr& e, int arity) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return Polynomial::constant(arity, e.rational());
    case ExprKind::Variable:
      if (e.variable_index() >= arity) return std::nullopt;
      return Polynomial::variable(arity, e.variable_index());
    case ExprKind::Add:
    case ExprKind::Sub: {
      auto a = to_polynomial(e.operand(0), arity);
      auto b = to_polynomial(e.operand(1), arity);
      if (!a || !b) return std::nullopt;
      if (e.kind() == ExprKind::Add) {
        *a += *b;
      } else {
        *a -= *b;
      }
      return a;
    }
    case ExprKind::Mul: {
      auto a = to_polynomial(e.operand(0), arity);
      auto b = to_polynomial(e.operand(1), arity);
      if (!a || !b) return std::nullopt;
      return *a * *b;
    }
    case ExprKind::Div: {
      auto a = to_polynomial(e.operand(0), arity);
      auto b = to_polynomial(e.operand(1), arity);
      if (!a || !b || b->degree() != 0 || b->is_zero()) return std::nullopt;
      return a->scaled(Rational(1) / b->terms().begin()->second);
    }
    case ExprKind::Neg: {
      auto a = to_polynomial(e.operand(0), arity);
      if (!a) return std::nullopt;
      return a->scaled(-1);
    }
    case ExprKind::Pow: {
      const Rational& c = e.rational();
      if (!is_integer(c) || c < 0 || c > 64) return std::nullopt;
      auto a = to_polynomial(e.operand(0), arity);
      if (!a) return std::nullopt;
      return a->power(static_cast<unsigned>(boost::multiprecision::numerator(c)));
    }
    case ExprKind::Exp:
    case ExprKind::Sin:
    case ExprKind::Cos:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// compiled evaluation

CompiledExpr::CompiledExpr(const Expr& e, int arity) : arity_(arity) {
  if (max_variable_index(e) >= arity) throw DimensionError("expression references a variable beyond its arity");
  emit(e, 0);
  int depth = 0;
  for (const Instr& ins : code_) {
    switch (ins.op) {
      case Op::Const:
      case Op::Var:
        ++depth;
        break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
        --depth;
        break;
      default:
        break;
    }
    max_stack_ = std::max(max_stack_, depth);
  }
}

void CompiledExpr::emit(const Expr& e, int depth) {
  switch (e.kind()) {
    case ExprKind::Constant:
      code_.push_back({Op::Const, 0, to_double(e.rational())});
      return;
    case ExprKind::Variable:
      code_.push_back({Op::Var, e.variable_index(), 0.0});
      return;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div: {
      emit(e.operand(0), depth);
      emit(e.operand(1), depth + 1);
      const Op op = e.kind() == ExprKind::Add   ? Op::Add
                    : e.kind() == ExprKind::Sub ? Op::Sub
                    : e.kind() == ExprKind::Mul ? Op::Mul
                                                : Op::Div;
      code_.push_back({op, 0, 0.0});
      return;
    }
    case ExprKind::Neg:
      emit(e.operand(0), depth);
      code_.push_back({Op::Neg, 0, 0.0});
      return;
    case ExprKind::Pow:
      emit(e.operand(0), depth);
      if (is_integer(e.rational()) && boost::multiprecision::abs(e.rational()) <= 1024) {
        code_.push_back({Op::PowInt, boost::multiprecision::numerator(e.rational()).convert_to<std::int32_t>(), 0.0});
      } else {
        code_.push_back({Op::PowReal, 0, to_double(e.rational())});
      }
      return;
    case ExprKind::Exp:
    case ExprKind::Sin:
    case ExprKind::Cos:
      emit(e.operand(0), depth);
      code_.push_back({e.kind() == ExprKind::Exp ? Op::Exp : e.kind() == ExprKind::Sin ? Op::Sin : Op::Cos, 0, 0.0});
      return;
  }
}

namespace {

double int_power(double base, std::int32_t exponent) {
  const bool invert = exponent < 0;
  std::uint32_t e = static_cast<std::uint32_t>(invert ? -static_cast<std::int64_t>(exponent) : exponent);
  double result = 1.0;
  while (e != 0) {
    if ((e & 1U) != 0) result *= base;
    e >>= 1U;
    if (e != 0) base *= base;
  }
  if (invert) {
    if (result == 0.0) throw DomainError("division by zero in expression");
    return 1.0 / result;
  }
  return result;
}

}  // namespace

double CompiledExpr::operator()(const double* x) const {
  std::array<double, 64> small{};
  std::vector<double> large;
  double* stack = small.data();
  if (max_stack_ > static_cast<int>(small.size())) {
    large.resize(static_cast<std::size_t>(max_stack_));
    stack = large.data();
  }
  int top = -1;
  for (const Instr& ins : code_) {
    switch (ins.op) {
      case Op::Const:
        stack[++top] = ins.value;
        break;
      case Op::Var:
        stack[++top] = x[ins.index];
        break;
      case Op::Add:
        stack[top - 1] += stack[top];
        --top;
        break;
      case Op::Sub:
        stack[top - 1] -= stack[top];
        --top;
        break;
      case Op::Mul:
        stack[top - 1] *= stack[top];
        --top;
        break;
      case Op::Div:
        if (stack[top] == 0.0) throw DomainError("division by zero in expression");
        stack[top - 1] /= stack[top];
        --top;
        break;
      case Op::Neg:
        stack[top] = -stack[top];
        break;
      case Op::PowInt:
        stack[top] = int_power(stack[top], ins.index);
        break;
      case Op::PowReal:
        if (stack[top] < 0.0) throw DomainError("fractional power of a negative number");
        if (stack[top] == 0.0 && ins.value < 0.0) throw DomainError("division by zero in expression");
        stack[top] = std::pow(stack[top], ins.value);
        break;
      case Op::Exp:
        stack[top] = std::exp(stack[top]);
        break;
      case Op::Sin:
        stack[top] = std::sin(stack[top]);
        break;
      case Op::Cos:
        stack[top] = std::cos(stack[top]);
        break;
    }
  }
  return stack[0];
}

}  // namespace ratnear
