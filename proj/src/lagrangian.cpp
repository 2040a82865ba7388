#include "jetlag/lagrangian.hpp"

namespace jetlag {

std::string to_string(LagrangianKind k) {
  switch (k) {
    case LagrangianKind::Expression: return "expression";
    case LagrangianKind::Harmonic: return "harmonic";
    case LagrangianKind::Electrodynamics: return "electrodynamics";
  }
  return "?";
}

namespace {
void check_g_shape(const Dims& dims, const ExprMatrix& g) {
  if (g.rows() != dims.n || g.cols() != dims.n)
    throw DimensionError("g must be " + std::to_string(dims.n) + "x" + std::to_string(dims.n));
}

void check_h(const Dims& dims, const TemporalMetric& h) {
  if (h.p() != dims.p) throw DimensionError("temporal metric must be " + std::to_string(dims.p) + "x" + std::to_string(dims.p));
}

void check_components(const Dims& dims, const DeclaredComponents& c) {
  check_g_shape(dims, c.g);
  if (c.g.uses(dsl::Op::VarV)) throw DimensionError("g of the electrodynamics family may not depend on velocities");
  if (c.has_U()) {
    if (c.U.rows() != dims.n || c.U.cols() != dims.p)
      throw DimensionError("U must be " + std::to_string(dims.n) + "x" + std::to_string(dims.p));
    if (c.U.uses(dsl::Op::VarV)) throw DimensionError("U may not depend on velocities");
  }
  if (c.has_F() && c.F.uses(dsl::Op::VarV)) throw DimensionError("F may not depend on velocities");
}
}  // namespace

LagrangianModel LagrangianModel::expression(Dims dims, dsl::Expr expr, TemporalMetric h) {
  check_h(dims, h);
  LagrangianModel m;
  m.dims_ = dims;
  m.kind_ = LagrangianKind::Expression;
  m.h_ = std::move(h);
  m.expr_ = std::move(expr);
  return m;
}

LagrangianModel LagrangianModel::harmonic(Dims dims, ExprMatrix g, TemporalMetric h) {
  return electrodynamics(dims, std::move(g), ExprMatrix(), dsl::Expr(), std::move(h)).with_kind(LagrangianKind::Harmonic);
}

LagrangianModel LagrangianModel::electrodynamics(Dims dims, ExprMatrix g, ExprMatrix U, dsl::Expr F, TemporalMetric h) {
  check_h(dims, h);
  DeclaredComponents c{std::move(g), std::move(U), std::move(F)};
  check_components(dims, c);
  LagrangianModel m;
  m.dims_ = dims;
  m.kind_ = LagrangianKind::Electrodynamics;
  m.h_ = std::move(h);
  m.declared_ = std::move(c);
  return m;
}

LagrangianModel LagrangianModel::with_kind(LagrangianKind k) && {
  kind_ = k;
  return std::move(*this);
}

void LagrangianModel::declare_components(DeclaredComponents c) {
  check_components(dims_, c);
  declared_ = std::move(c);
}

bool LagrangianModel::declared_g_uses(dsl::Op var) const { return declared_ && declared_->g.uses(var); }

}  // namespace jetlag
