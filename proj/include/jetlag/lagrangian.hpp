#pragma once

// Multi-time Lagrangians: a free DSL expression, or one of the two builtin
// families
//   harmonic         L = h^{ab}(t) g_ij(t,x) v^i_a v^j_b
//   electrodynamics  L = h^{ab}(t) g_ij(t,x) v^i_a v^j_b + U^{(a)}_{(i)}(t,x) v^i_a + F(t,x)

#include <optional>
#include <string>

#include "jetlag/dsl.hpp"
#include "jetlag/metric.hpp"

namespace jetlag {

enum class LagrangianKind { Expression, Harmonic, Electrodynamics };

std::string to_string(LagrangianKind k);

/// Electrodynamics components supplied as text: g is n x n, U is n x p
/// (row i, column a holds U^{(a)}_{(i)}), F scalar.
struct DeclaredComponents {
  ExprMatrix g;
  ExprMatrix U;   // empty means zero
  dsl::Expr F;    // invalid means zero

  bool has_U() const { return !U.empty(); }
  bool has_F() const { return F.valid(); }
};

class LagrangianModel {
 public:
  static LagrangianModel expression(Dims dims, dsl::Expr expr, TemporalMetric h);
  static LagrangianModel harmonic(Dims dims, ExprMatrix g, TemporalMetric h);
  static LagrangianModel electrodynamics(Dims dims, ExprMatrix g, ExprMatrix U, dsl::Expr F, TemporalMetric h);

  /// Attach declared components to an expression Lagrangian so that they
  /// can be checked against its decomposition.
  void declare_components(DeclaredComponents c);

  const Dims& dims() const { return dims_; }
  LagrangianKind kind() const { return kind_; }
  const TemporalMetric& h() const { return h_; }
  const dsl::Expr& expr() const { return expr_; }
  const std::optional<DeclaredComponents>& declared() const { return declared_; }

  /// True when g, U, F are known in closed form (builtin families).
  bool builtin() const { return kind_ != LagrangianKind::Expression; }

  /// g_ij depends on t (declared) or possibly does (expression kind).
  bool declared_g_uses(dsl::Op var) const;

  template <class T>
  Mat<T> declared_g(const JetPointT<T>& pt) const {
    return symmetrize(declared_->g.eval(pt));
  }

  template <class T>
  Mat<T> declared_U(const JetPointT<T>& pt) const {
    if (!declared_->has_U()) return Mat<T>(dims_.n, dims_.p);
    return declared_->U.eval(pt);
  }

  template <class T>
  T declared_F(const JetPointT<T>& pt) const {
    if (!declared_->has_F()) return ad::constant<T>(0.0);
    return dsl::eval(declared_->F, pt);
  }

  /// L from declared components.
  template <class T>
  T assemble(const JetPointT<T>& pt) const {
    const std::size_t p = dims_.p, n = dims_.n;
    Mat<T> hu = h_.upper(pt.t);
    Mat<T> g = declared_g(pt);
    T s = ad::constant<T>(0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t a = 0; a < p; ++a)
          for (std::size_t b = 0; b < p; ++b) s = s + hu(a, b) * g(i, j) * pt.vel(i, a) * pt.vel(j, b);
    if (declared_->has_U()) {
      Mat<T> U = declared_U(pt);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < p; ++a) s = s + U(i, a) * pt.vel(i, a);
    }
    if (declared_->has_F()) s = s + declared_F(pt);
    return s;
  }

  template <class T>
  T operator()(const JetPointT<T>& pt) const {
    if (kind_ == LagrangianKind::Expression) return dsl::eval(expr_, pt);
    return assemble(pt);
  }

 private:
  LagrangianModel with_kind(LagrangianKind k) &&;

  Dims dims_;
  LagrangianKind kind_ = LagrangianKind::Expression;
  TemporalMetric h_;
  dsl::Expr expr_;
  std::optional<DeclaredComponents> declared_;
};

}  // namespace jetlag
