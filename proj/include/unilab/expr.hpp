#pragma once

// Scalar expressions in the body coordinates x1, x2, x3.
//
// Grammar (precedence high to low):
//   primary := number | pi | e | x1 | x2 | x3 | func '(' sum ')' | '(' sum ')'
//   power   := primary ('^' unary)?          -- right associative
//   unary   := '-' unary | power
//   product := unary (('*' | '/') unary)*
//   sum     := product (('+' | '-') product)*
// with func one of sin cos tan exp log sqrt.
//
// Variable axes are zero based in the C++ API: x1 is axis 0.

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "unilab/tensor.hpp"

namespace unilab {

enum class ExprKind { Number, Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt };

struct ExprNode;

/// Immutable, shareable expression tree handle.
class ScalarExpr {
 public:
  ScalarExpr() = default;  // the literal 0
  explicit ScalarExpr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

  const ExprNode& node() const;
  ExprKind kind() const;

  /// True when the expression contains no variable.
  bool is_constant() const;
  /// Value of a constant expression; only meaningful when is_constant().
  double constant_value() const;

 private:
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  ExprKind kind = ExprKind::Number;
  double value = 0.0;   // Number, Constant
  std::string name;     // Constant ("pi", "e")
  std::size_t axis = 0; // Variable
  Func func = Func::Sin;
  ScalarExpr lhs;       // unary operand or left child
  ScalarExpr rhs;
  bool has_variable = false;
};

// Builders. They fold numeric constants and drop trivial identities
// (x + 0, x * 1, x * 0, x ^ 1, ...).
ScalarExpr number(double v);
ScalarExpr named_constant(std::string_view name);  // "pi" or "e"
ScalarExpr variable(std::size_t axis);
ScalarExpr call(Func f, const ScalarExpr& arg);
ScalarExpr pow(const ScalarExpr& base, const ScalarExpr& exponent);

ScalarExpr operator-(const ScalarExpr& a);
ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);

inline ScalarExpr sin(const ScalarExpr& a) { return call(Func::Sin, a); }
inline ScalarExpr cos(const ScalarExpr& a) { return call(Func::Cos, a); }
inline ScalarExpr tan(const ScalarExpr& a) { return call(Func::Tan, a); }
inline ScalarExpr exp(const ScalarExpr& a) { return call(Func::Exp, a); }
inline ScalarExpr log(const ScalarExpr& a) { return call(Func::Log, a); }
inline ScalarExpr sqrt(const ScalarExpr& a) { return call(Func::Sqrt, a); }

/// Throws SyntaxError{offset} or UnknownIdentifier{offset}.
ScalarExpr parse(std::string_view text);

/// Throws DomainError or NonFinite.
double eval(const ScalarExpr& e, const Vec3& x);

/// Exact partial derivative with respect to the given axis.
ScalarExpr diff(const ScalarExpr& e, std::size_t axis);

/// Re-parseable text form.
std::string to_string(const ScalarExpr& e);

const char* func_name(Func f);

/// Three-component analytic vector field.
using VectorExpr = std::array<ScalarExpr, 3>;

Vec3 eval(const VectorExpr& v, const Vec3& x);
VectorExpr parse_vector(const std::array<std::string, 3>& text);

}  // namespace unilab
