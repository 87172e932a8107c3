#include "unilab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "unilab/errors.hpp"

namespace unilab {

namespace {

const ExprNode& zero_node() {
  static const ExprNode zero{};
  return zero;
}

ScalarExpr make(ExprNode n) {
  n.has_variable = n.kind == ExprKind::Variable || n.lhs.node().has_variable ||
                   n.rhs.node().has_variable;
  return ScalarExpr(std::make_shared<const ExprNode>(std::move(n)));
}

bool is_number(const ScalarExpr& e, double v) {
  return e.kind() == ExprKind::Number && e.node().value == v;
}

bool is_literal(const ScalarExpr& e) { return e.kind() == ExprKind::Number; }

ScalarExpr binary(ExprKind k, const ScalarExpr& a, const ScalarExpr& b) {
  ExprNode n;
  n.kind = k;
  n.lhs = a;
  n.rhs = b;
  return make(std::move(n));
}

}  // namespace

const ExprNode& ScalarExpr::node() const { return node_ ? *node_ : zero_node(); }

ExprKind ScalarExpr::kind() const { return node().kind; }

bool ScalarExpr::is_constant() const { return !node().has_variable; }

double ScalarExpr::constant_value() const { return eval(*this, Vec3{}); }

ScalarExpr number(double v) {
  ExprNode n;
  n.kind = ExprKind::Number;
  n.value = v;
  return make(std::move(n));
}

ScalarExpr named_constant(std::string_view name) {
  ExprNode n;
  n.kind = ExprKind::Constant;
  n.name = std::string(name);
  n.value = name == "pi" ? std::numbers::pi : std::numbers::e;
  return make(std::move(n));
}

ScalarExpr variable(std::size_t axis) {
  ExprNode n;
  n.kind = ExprKind::Variable;
  n.axis = axis;
  return make(std::move(n));
}

ScalarExpr call(Func f, const ScalarExpr& arg) {
  ExprNode n;
  n.kind = ExprKind::Call;
  n.func = f;
  n.lhs = arg;
  return make(std::move(n));
}

ScalarExpr pow(const ScalarExpr& base, const ScalarExpr& exponent) {
  if (is_number(exponent, 1.0)) return base;
  if (is_number(exponent, 0.0)) return number(1.0);
  if (is_literal(base) && is_literal(exponent)) {
    const double v = std::pow(base.node().value, exponent.node().value);
    if (std::isfinite(v)) return number(v);
  }
  return binary(ExprKind::Pow, base, exponent);
}

ScalarExpr operator-(const ScalarExpr& a) {
  if (is_literal(a)) return number(-a.node().value);
  if (a.kind() == ExprKind::Neg) return a.node().lhs;
  ExprNode n;
  n.kind = ExprKind::Neg;
  n.lhs = a;
  return make(std::move(n));
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  if (is_number(a, 0.0)) return b;
  if (is_number(b, 0.0)) return a;
  if (is_literal(a) && is_literal(b)) return number(a.node().value + b.node().value);
  if (b.kind() == ExprKind::Neg) return binary(ExprKind::Sub, a, b.node().lhs);
  return binary(ExprKind::Add, a, b);
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
  if (is_number(b, 0.0)) return a;
  if (is_number(a, 0.0)) return -b;
  if (is_literal(a) && is_literal(b)) return number(a.node().value - b.node().value);
  if (b.kind() == ExprKind::Neg) return binary(ExprKind::Add, a, b.node().lhs);
  return binary(ExprKind::Sub, a, b);
}

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  if (is_number(a, 0.0) || is_number(b, 0.0)) return number(0.0);
  if (is_number(a, 1.0)) return b;
  if (is_number(b, 1.0)) return a;
  if (is_number(a, -1.0)) return -b;
  if (is_number(b, -1.0)) return -a;
  if (is_literal(a) && is_literal(b)) return number(a.node().value * b.node().value);
  return binary(ExprKind::Mul, a, b);
}

ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
  if (is_number(b, 1.0)) return a;
  if (is_number(a, 0.0) && !is_number(b, 0.0)) return number(0.0);
  if (is_literal(a) && is_literal(b) && b.node().value != 0.0)
    return number(a.node().value / b.node().value);
  return binary(ExprKind::Div, a, b);
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ScalarExpr parse_all() {
    ScalarExpr e = sum();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

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

  ScalarExpr sum() {
    ScalarExpr e = product();
    for (;;) {
      if (accept('+')) e = binary(ExprKind::Add, e, product());
      else if (accept('-')) e = binary(ExprKind::Sub, e, product());
      else return e;
    }
  }

  ScalarExpr product() {
    ScalarExpr e = unary();
    for (;;) {
      if (accept('*')) e = binary(ExprKind::Mul, e, unary());
      else if (accept('/')) e = binary(ExprKind::Div, e, unary());
      else return e;
    }
  }

  ScalarExpr unary() {
    if (accept('-')) {
      ExprNode n;
      n.kind = ExprKind::Neg;
      n.lhs = unary();
      return make(std::move(n));
    }
    return power();
  }

  ScalarExpr power() {
    ScalarExpr base = primary();
    if (accept('^')) return binary(ExprKind::Pow, base, unary());
    return base;
  }

  ScalarExpr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input, expected operand");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == '(') {
      ++pos_;
      ScalarExpr inner = sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    fail("expected operand");
  }

  ScalarExpr literal() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ == start + 1 && text_[start] == '.') {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        digits();
      }
    }
    const std::string token(text_.substr(start, pos_ - start));
    ExprNode n;
    n.kind = ExprKind::Number;
    n.value = std::strtod(token.c_str(), nullptr);
    return make(std::move(n));
  }

  ScalarExpr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    if (name == "x1" || name == "x2" || name == "x3") {
      return variable(static_cast<std::size_t>(name[1] - '1'));
    }
    if (name == "pi" || name == "e") return named_constant(name);

    static constexpr std::array<std::pair<std::string_view, Func>, 6> funcs{{
        {"sin", Func::Sin}, {"cos", Func::Cos}, {"tan", Func::Tan},
        {"exp", Func::Exp}, {"log", Func::Log}, {"sqrt", Func::Sqrt},
    }};
    for (const auto& [fname, f] : funcs) {
      if (name != fname) continue;
      if (!accept('(')) fail("expected '(' after function name '" + name + "'");
      ScalarExpr arg = sum();
      if (!accept(')')) fail("expected ')'");
      ExprNode n;
      n.kind = ExprKind::Call;
      n.func = f;
      n.lhs = arg;
      return make(std::move(n));
    }
    throw UnknownIdentifier(start, name);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarExpr parse(std::string_view text) { return Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw NonFinite(std::string("non-finite value in ") + what);
  return v;
}

double eval_node(const ExprNode& n, const Vec3& x) {
  switch (n.kind) {
    case ExprKind::Number:
    case ExprKind::Constant: return n.value;
    case ExprKind::Variable: return x[n.axis];
    case ExprKind::Neg: return -eval_node(n.lhs.node(), x);
    case ExprKind::Add: return checked(eval_node(n.lhs.node(), x) + eval_node(n.rhs.node(), x), "+");
    case ExprKind::Sub: return checked(eval_node(n.lhs.node(), x) - eval_node(n.rhs.node(), x), "-");
    case ExprKind::Mul: return checked(eval_node(n.lhs.node(), x) * eval_node(n.rhs.node(), x), "*");
    case ExprKind::Div: return checked(eval_node(n.lhs.node(), x) / eval_node(n.rhs.node(), x), "/");
    case ExprKind::Pow: {
      const double b = eval_node(n.lhs.node(), x);
      const double p = eval_node(n.rhs.node(), x);
      if (b < 0.0 && p != std::floor(p)) throw DomainError("negative base with non-integer exponent");
      return checked(std::pow(b, p), "^");
    }
    case ExprKind::Call: {
      const double a = eval_node(n.lhs.node(), x);
      switch (n.func) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Tan: return checked(std::tan(a), "tan");
        case Func::Exp: return checked(std::exp(a), "exp");
        case Func::Log:
          if (!(a > 0.0)) throw DomainError("log of non-positive argument");
          return std::log(a);
        case Func::Sqrt:
          if (a < 0.0) throw DomainError("sqrt of negative argument");
          return std::sqrt(a);
      }
    }
  }
  return 0.0;
}

}  // namespace

double eval(const ScalarExpr& e, const Vec3& x) {
  return checked(eval_node(e.node(), x), "expression");
}

Vec3 eval(const VectorExpr& v, const Vec3& x) { return {eval(v[0], x), eval(v[1], x), eval(v[2], x)}; }

VectorExpr parse_vector(const std::array<std::string, 3>& text) {
  return {parse(text[0]), parse(text[1]), parse(text[2])};
}

// ---------------------------------------------------------------------------
// Differentiation

ScalarExpr diff(const ScalarExpr& e, std::size_t axis) {
  const ExprNode& n = e.node();
  if (!n.has_variable) return number(0.0);
  const ScalarExpr& a = n.lhs;
  const ScalarExpr& b = n.rhs;
  switch (n.kind) {
    case ExprKind::Number:
    case ExprKind::Constant: return number(0.0);
    case ExprKind::Variable: return number(n.axis == axis ? 1.0 : 0.0);
    case ExprKind::Neg: return -diff(a, axis);
    case ExprKind::Add: return diff(a, axis) + diff(b, axis);
    case ExprKind::Sub: return diff(a, axis) - diff(b, axis);
    case ExprKind::Mul: return diff(a, axis) * b + a * diff(b, axis);
    case ExprKind::Div:
      if (b.is_constant()) return diff(a, axis) / b;
      return (diff(a, axis) * b - a * diff(b, axis)) / pow(b, number(2.0));
    case ExprKind::Pow:
      if (b.is_constant()) {
        return b * pow(a, b - number(1.0)) * diff(a, axis);
      }
      // d(a^b) = a^b (b' log a + b a'/a)
      return e * (diff(b, axis) * log(a) + b * diff(a, axis) / a);
    case ExprKind::Call: {
      const ScalarExpr da = diff(a, axis);
      switch (n.func) {
        case Func::Sin: return cos(a) * da;
        case Func::Cos: return -(sin(a) * da);
        case Func::Tan: return da / pow(cos(a), number(2.0));
        case Func::Exp: return e * da;
        case Func::Log: return da / a;
        case Func::Sqrt: return da / (number(2.0) * e);
      }
    }
  }
  return number(0.0);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string print(const ExprNode& n);

std::string wrap(const ExprNode& child, int min_prec) {
  std::string s = print(child);
  return precedence(child) < min_prec ? "(" + s + ")" : s;
}

std::string print(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::Number: {
      const std::string s = format_number(std::abs(n.value));
      return n.value < 0 ? "(-" + s + ")" : s;
    }
    case ExprKind::Constant: return n.name;
    case ExprKind::Variable: return "x" + std::to_string(n.axis + 1);
    case ExprKind::Neg: return "-" + wrap(n.lhs.node(), 3);
    case ExprKind::Add: return print(n.lhs.node()) + " + " + wrap(n.rhs.node(), 2);
    case ExprKind::Sub: return print(n.lhs.node()) + " - " + wrap(n.rhs.node(), 2);
    case ExprKind::Mul: return wrap(n.lhs.node(), 2) + "*" + wrap(n.rhs.node(), 3);
    case ExprKind::Div: return wrap(n.lhs.node(), 2) + "/" + wrap(n.rhs.node(), 3);
    case ExprKind::Pow: return wrap(n.lhs.node(), 5) + "^" + wrap(n.rhs.node(), 3);
    case ExprKind::Call: return std::string(func_name(n.func)) + "(" + print(n.lhs.node()) + ")";
  }
  return "?";
}

}  // namespace

std::string to_string(const ScalarExpr& e) { return print(e.node()); }

}  // namespace unilab
