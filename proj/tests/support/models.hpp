#pragma once

// Small catalogue of Lagrangians shared by the tests.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "jetlag/extremal.hpp"
#include "jetlag/lagrangian.hpp"

namespace jetlag::fixtures {

using Rows = std::vector<std::vector<std::string>>;

inline TemporalMetric temporal(std::size_t p, const Rows& rows, Signature sig) {
  return TemporalMetric::from_entries(ExprMatrix::parse(rows, Dims(p, 1)), sig);
}

inline TemporalMetric euclidean_time(std::size_t p) { return TemporalMetric::flat(p, {static_cast<int>(p), 0, 0}); }

inline LagrangianModel harmonic(const Dims& d, const Rows& g, TemporalMetric h) {
  return LagrangianModel::harmonic(d, ExprMatrix::parse(g, d), std::move(h));
}

inline LagrangianModel electro(const Dims& d, const Rows& g, const Rows& U, const std::string& F, TemporalMetric h) {
  return LagrangianModel::electrodynamics(d, ExprMatrix::parse(g, d), U.empty() ? ExprMatrix() : ExprMatrix::parse(U, d),
                                          F.empty() ? dsl::Expr() : dsl::parse(F, d), std::move(h));
}

inline LagrangianModel expression(const Dims& d, const std::string& L, TemporalMetric h) {
  return LagrangianModel::expression(d, dsl::parse(L, d), std::move(h));
}

/// Round sphere as a harmonic Lagrangian, p = 1, h = 1.
inline LagrangianModel sphere_p1() {
  Dims d(1, 2);
  return harmonic(d, {{"1", "0"}, {"0", "sin(x1)^2"}}, euclidean_time(1));
}

/// Two-time electrodynamics with every ingredient switched on: curved h,
/// t- and x-dependent g, nonzero U and F.
inline LagrangianModel rich_electro_p2() {
  Dims d(2, 2);
  return electro(d, {{"2+sin(x1)*exp(0.3*t1)", "0.2*x2"}, {"0.2*x2", "1.5+x1^2+0.1*t2"}},
                 {{"x2*t1", "sin(x1)"}, {"x1*x2", "cos(t2)+x1"}}, "x1^2*x2+t1*x2",
                 temporal(2, {{"1+t1^2", "0.1"}, {"0.1", "exp(t2)"}}, {2, 0, 0}));
}

/// The same Lagrangian written out as one expression in v.
inline std::string rich_electro_p2_expression() {
  // h^{ab} is not polynomial in t, so the expression form is built with an
  // explicit inverse of [[1+t1^2, 0.1], [0.1, exp(t2)]].
  const std::string det = "((1+t1^2)*exp(t2)-0.01)";
  const std::string h11 = "(exp(t2)/" + det + ")";
  const std::string h12 = "(-0.1/" + det + ")";
  const std::string h22 = "((1+t1^2)/" + det + ")";
  const std::string g11 = "(2+sin(x1)*exp(0.3*t1))", g12 = "(0.2*x2)", g22 = "(1.5+x1^2+0.1*t2)";
  auto quad = [&](const std::string& a, const std::string& b) {
    // g_ij v^i_a v^j_b
    return "(" + g11 + "*v1_" + a + "*v1_" + b + "+" + g12 + "*(v1_" + a + "*v2_" + b + "+v2_" + a + "*v1_" + b + ")+" + g22 +
           "*v2_" + a + "*v2_" + b + ")";
  };
  return h11 + "*" + quad("1", "1") + "+2*" + h12 + "*" + quad("1", "2") + "+" + h22 + "*" + quad("2", "2") +
         "+x2*t1*v1_1+sin(x1)*v1_2+x1*x2*v2_1+(cos(t2)+x1)*v2_2+x1^2*x2+t1*x2";
}

/// Single-time Lagrangian with velocity-dependent g, curved h and explicit
/// time dependence.
inline LagrangianModel finsler_p1() {
  Dims d(1, 2);
  return expression(d, "(1+0.2*t1^2)*(v1_1^2+(2+sin(x1))*v2_1^2)+0.1*v1_1^2*v2_1^2+x2*v1_1+x1*t1",
                    temporal(1, {{"exp(2*t1)"}}, {1, 0, 0}));
}

/// Autonomous two-time electrodynamics: g, U, F depend on x only.
inline LagrangianModel autonomous_electro_p2() {
  Dims d(2, 2);
  return electro(d, {{"2+sin(x1)", "0.3*x2"}, {"0.3*x2", "1+x1^2"}}, {{"x2", "x1*x2"}, {"sin(x1)", "0"}}, "x1*x2",
                 temporal(2, {{"1+t1^2", "0"}, {"0", "1"}}, {2, 0, 0}));
}

/// Single-time extremal problems; `exact` is set where a closed form exists.
struct ExtremalCase {
  std::string name;
  LagrangianModel model;
  ExtremalProblem problem;
  std::function<std::vector<double>(double)> exact;
};

inline std::vector<ExtremalCase> extremal_corpus() {
  std::vector<ExtremalCase> out;
  out.push_back({"line", harmonic(Dims(1, 2), {{"1", "0"}, {"0", "1"}}, euclidean_time(1)), {0.0, {0, 0}, {1, 2}, 1.0, 1e-3},
                 [](double t) { return std::vector<double>{t, 2 * t}; }});
  out.push_back({"sphere", sphere_p1(), {0.0, {1.5707963267948966, 0.0}, {0.0, 1.0}, 1.0, 1e-3}, nullptr});
  out.push_back({"exp_time", harmonic(Dims(1, 1), {{"1"}}, temporal(1, {{"exp(2*t1)"}}, {1, 0, 0})),
                 {0.0, {0.5}, {0.7}, 1.0, 1e-3}, [](double t) { return std::vector<double>{0.5 + 0.7 * (std::exp(t) - 1.0)}; }});
  out.push_back({"oscillator", electro(Dims(1, 1), {{"1"}}, {}, "-x1^2", euclidean_time(1)), {0.0, {0.3}, {0.8}, 1.0, 1e-3},
                 [](double t) { return std::vector<double>{0.3 * std::cos(t) + 0.8 * std::sin(t)}; }});
  out.push_back({"magnetic", electro(Dims(1, 2), {{"1", "0"}, {"0", "1"}}, {{"-0.5*x2"}, {"0.5*x1"}}, "", euclidean_time(1)),
                 {0.0, {0.1, 0.2}, {0.6, -0.4}, 1.0, 1e-3}, nullptr});
  out.push_back({"finsler", finsler_p1(), {0.0, {0.2, 0.4}, {0.5, 0.3}, 1.0, 1e-3}, nullptr});
  return out;
}

}  // namespace jetlag::fixtures
