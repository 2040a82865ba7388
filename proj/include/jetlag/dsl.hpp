#pragma once

// Scalar expression language over J^1(T,M).
//
//   expr  := term {("+"|"-") term}
//   term  := unary {("*"|"/") unary}
//   unary := ["-"] power
//   power := atom ["^" unary]
//   atom  := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
//
// Variables are t1..t9, x1..x9 and v{i}_{alpha}; functions are sin, cos,
// tan, exp, log, sqrt, sinh, cosh, abs. Evaluation is generic over the
// scalar type so derivative scalars flow through the same tree.

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jetlag/autodiff.hpp"
#include "jetlag/jet.hpp"

namespace jetlag::dsl {

enum class Op { Const, VarT, VarX, VarV, Add, Sub, Mul, Div, Pow, Neg, Func };
enum class Fn { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Abs };

std::optional<Fn> function_from_name(std::string_view name);
std::string_view function_name(Fn f);

struct Node {
  Op op = Op::Const;
  double value = 0.0;     // Const
  std::size_t i = 0;      // VarX / VarV spatial index (0-based)
  std::size_t alpha = 0;  // VarT / VarV temporal index (0-based)
  Fn fn = Fn::Sin;        // Func
  std::size_t offset = 0; // byte offset in the source
  std::shared_ptr<const Node> lhs;  // unary operand / left child
  std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string message, std::vector<std::string> expected,
             std::string_view source);
  std::size_t offset() const { return offset_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t offset_;
  std::string message_;
  std::vector<std::string> expected_;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class EvalError : public Error {
 public:
  EvalError(std::size_t offset, const std::string& message)
      : Error(message + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Immutable parsed expression.
class Expr {
 public:
  Expr() = default;
  explicit Expr(NodePtr root) : root_(std::move(root)) {}
  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  bool valid() const { return static_cast<bool>(root_); }

  /// True if any variable of the given kind appears.
  bool uses(Op var_kind) const;

 private:
  NodePtr root_;
};

Expr parse(std::string_view source, const Dims& dims);
std::string format(const Expr& e);
bool structurally_equal(const Node& a, const Node& b);
inline bool structurally_equal(const Expr& a, const Expr& b) {
  return structurally_equal(a.root(), b.root());
}

Expr constant(double c);

namespace detail {

template <class T>
void check_finite(const T& r, std::size_t offset) {
  if (!std::isfinite(ad::value_of(r))) throw EvalError(offset, "non-finite result");
}

template <class T>
T eval_node(const Node& n, const JetPointT<T>& pt) {
  using ad::value_of;
  switch (n.op) {
    case Op::Const: return ad::constant<T>(n.value);
    case Op::VarT: return pt.t[n.alpha];
    case Op::VarX: return pt.x[n.i];
    case Op::VarV: return pt.v[pt.dims.vidx(n.i, n.alpha)];
    case Op::Add: return eval_node(*n.lhs, pt) + eval_node(*n.rhs, pt);
    case Op::Sub: return eval_node(*n.lhs, pt) - eval_node(*n.rhs, pt);
    case Op::Mul: return eval_node(*n.lhs, pt) * eval_node(*n.rhs, pt);
    case Op::Neg: return -eval_node(*n.lhs, pt);
    case Op::Div: {
      T a = eval_node(*n.lhs, pt);
      T b = eval_node(*n.rhs, pt);
      if (value_of(b) == 0.0) throw EvalError(n.offset, "division by zero");
      return a / b;
    }
    case Op::Pow: {
      T base = eval_node(*n.lhs, pt);
      const Node& ex = *n.rhs;
      if (ex.op == Op::Const && ex.value == std::floor(ex.value) && std::abs(ex.value) <= 1024.0) {
        long k = static_cast<long>(ex.value);
        if (k < 0 && value_of(base) == 0.0) throw EvalError(n.offset, "zero raised to a negative power");
        return ad::pow_int(base, k);
      }
      T e = eval_node(ex, pt);
      if (value_of(base) < 0.0) throw EvalError(n.offset, "negative base with non-integer exponent");
      if (value_of(base) == 0.0) {
        if constexpr (ad::is_ad_v<T>) {
          throw EvalError(n.offset, "power is not differentiable at zero base");
        } else {
          if (e > 0.0) return 0.0;
          throw EvalError(n.offset, "zero raised to a non-positive power");
        }
      }
      T r = ad::exp(e * ad::log(base));
      check_finite(r, n.offset);
      return r;
    }
    case Op::Func: {
      T a = eval_node(*n.lhs, pt);
      double av = value_of(a);
      T r{};
      switch (n.fn) {
        case Fn::Sin: r = ad::sin(a); break;
        case Fn::Cos: r = ad::cos(a); break;
        case Fn::Tan:
          if (std::cos(av) == 0.0) throw EvalError(n.offset, "tan at a pole");
          r = ad::tan(a);
          break;
        case Fn::Exp: r = ad::exp(a); break;
        case Fn::Log:
          if (av <= 0.0) throw EvalError(n.offset, "log of a non-positive value");
          r = ad::log(a);
          break;
        case Fn::Sqrt:
          if (av < 0.0) throw EvalError(n.offset, "sqrt of a negative value");
          if constexpr (ad::is_ad_v<T>) {
            if (av == 0.0) throw EvalError(n.offset, "sqrt is not differentiable at zero");
          }
          r = ad::sqrt(a);
          break;
        case Fn::Sinh: r = ad::sinh(a); break;
        case Fn::Cosh: r = ad::cosh(a); break;
        case Fn::Abs:
          if constexpr (ad::is_ad_v<T>) {
            if (av == 0.0) throw EvalError(n.offset, "abs is not differentiable at zero");
          }
          r = ad::abs(a);
          break;
      }
      check_finite(r, n.offset);
      return r;
    }
  }
  throw EvalError(n.offset, "malformed expression node");
}

}  // namespace detail

/// Evaluate at a jet point. Throws EvalError on domain violations.
template <class T>
T eval(const Expr& e, const JetPointT<T>& pt) {
  return detail::eval_node(e.root(), pt);
}

}  // namespace jetlag::dsl
