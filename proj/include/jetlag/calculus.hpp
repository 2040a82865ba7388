#pragma once

// First and second partials of scalar fields on the jet space. Forward-mode
// values are the reference; central differences exist only to cross-check.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "jetlag/diff.hpp"
#include "jetlag/dsl.hpp"
#include "jetlag/jet.hpp"

namespace jetlag {

/// Scalar field given by a DSL expression.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(dsl::Expr e) : expr_(std::move(e)) {}
  ScalarField(std::string_view source, const Dims& dims) : expr_(dsl::parse(source, dims)) {}

  template <class T>
  T operator()(const JetPointT<T>& pt) const {
    return dsl::eval(expr_, pt);
  }

  const dsl::Expr& expr() const { return expr_; }

 private:
  dsl::Expr expr_;
};

struct DiffConfig {
  double fd_step_1 = 6e-6;
  double fd_step_2 = 2e-4;
  double crosscheck_tol = 1e-5;
  double abs_floor = 1e-8;
};

template <class F>
double d1(const F& f, const JetPoint& pt, const Coord& wrt) {
  return partial(f, pt, wrt);
}

template <class F>
double d2(const F& f, const JetPoint& pt, const Coord& wrt1, const Coord& wrt2) {
  return second_partial(f, pt, wrt1, wrt2);
}

namespace detail {
inline double fd_step(double base, double c) { return base * std::max(1.0, std::abs(c)); }

template <class F>
double eval_shifted(const F& f, JetPoint pt, const Coord& a, double ha, const Coord& b, double hb) {
  coord_ref(pt, a) += ha;
  coord_ref(pt, b) += hb;
  return f(pt);
}
}  // namespace detail

/// Central first difference.
template <class F>
double fd_d1(const F& f, const JetPoint& pt, const Coord& wrt, const DiffConfig& cfg = {}) {
  double h = detail::fd_step(cfg.fd_step_1, coord_ref(pt, wrt));
  JetPoint p1 = pt, m1 = pt;
  coord_ref(p1, wrt) += h;
  coord_ref(m1, wrt) -= h;
  return (f(p1) - f(m1)) / (2.0 * h);
}

/// Central second difference; the four-point stencil for mixed partials.
template <class F>
double fd_d2(const F& f, const JetPoint& pt, const Coord& a, const Coord& b, const DiffConfig& cfg = {}) {
  double ha = detail::fd_step(cfg.fd_step_2, coord_ref(pt, a));
  if (a == b) {
    JetPoint p1 = pt, m1 = pt;
    coord_ref(p1, a) += ha;
    coord_ref(m1, a) -= ha;
    return (f(p1) - 2.0 * f(pt) + f(m1)) / (ha * ha);
  }
  double hb = detail::fd_step(cfg.fd_step_2, coord_ref(pt, b));
  double pp = detail::eval_shifted(f, pt, a, ha, b, hb);
  double pm = detail::eval_shifted(f, pt, a, ha, b, -hb);
  double mp = detail::eval_shifted(f, pt, a, -ha, b, hb);
  double mm = detail::eval_shifted(f, pt, a, -ha, b, -hb);
  return (pp - pm - mp + mm) / (4.0 * ha * hb);
}

struct CrosscheckReport {
  double max_rel = 0.0;         // worst normalized discrepancy over all partials
  double max_rel_first = 0.0;
  double max_rel_second = 0.0;
  double max_abs = 0.0;
  std::string worst;            // e.g. "d2(x1,v1_1)"
  std::size_t checked = 0;
  std::size_t failures = 0;
  bool passed = true;
};

/// Discrepancy of one AD/FD pair. Differences under the absolute floor
/// count as agreement; otherwise the difference is normalized by the larger
/// of |AD value| and |f(point)|, the scale that bounds FD roundoff.
inline double crosscheck_discrepancy(double ad_value, double fd_value, double f_value, double abs_floor) {
  double err = std::abs(ad_value - fd_value);
  if (err <= abs_floor) return 0.0;
  double scale = std::max(std::abs(ad_value), std::abs(f_value));
  if (scale == 0.0) return HUGE_VAL;
  return err / scale;
}

/// Compare every first partial and every second partial (upper triangle)
/// between forward mode and central differences.
template <class F>
CrosscheckReport fd_crosscheck(const F& f, const JetPoint& pt, const DiffConfig& cfg = {}) {
  CrosscheckReport rep;
  const double fv = f(pt);
  const std::size_t total = pt.dims.total();
  auto record = [&](double rel, double abs_err, const std::string& name, bool second) {
    ++rep.checked;
    rep.max_abs = std::max(rep.max_abs, abs_err);
    double& slot = second ? rep.max_rel_second : rep.max_rel_first;
    slot = std::max(slot, rel);
    if (rep.worst.empty() || rel > rep.max_rel) {
      rep.max_rel = rel;
      rep.worst = name;
    }
    if (rel > cfg.crosscheck_tol) {
      ++rep.failures;
      rep.passed = false;
    }
  };
  for (std::size_t a = 0; a < total; ++a) {
    Coord ca = Coord::from_flat(pt.dims, a);
    double ad = d1(f, pt, ca);
    double fd = fd_d1(f, pt, ca, cfg);
    record(crosscheck_discrepancy(ad, fd, fv, cfg.abs_floor), std::abs(ad - fd), "d1(" + ca.name() + ")", false);
  }
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t b = a; b < total; ++b) {
      Coord ca = Coord::from_flat(pt.dims, a);
      Coord cb = Coord::from_flat(pt.dims, b);
      double ad = d2(f, pt, ca, cb);
      double fd = fd_d2(f, pt, ca, cb, cfg);
      record(crosscheck_discrepancy(ad, fd, fv, cfg.abs_floor), std::abs(ad - fd),
             "d2(" + ca.name() + "," + cb.name() + ")", true);
    }
  }
  return rep;
}

/// Largest relative asymmetry |d2(a,b) - d2(b,a)| / max(1, |d2(a,b)|).
template <class F>
double schwartz_asymmetry(const F& f, const JetPoint& pt) {
  double worst = 0.0;
  const std::size_t total = pt.dims.total();
  for (std::size_t a = 0; a < total; ++a) {
    for (std::size_t b = a + 1; b < total; ++b) {
      Coord ca = Coord::from_flat(pt.dims, a);
      Coord cb = Coord::from_flat(pt.dims, b);
      double ab = d2(f, pt, ca, cb);
      double ba = d2(f, pt, cb, ca);
      worst = std::max(worst, std::abs(ab - ba) / std::max(1.0, std::abs(ab)));
    }
  }
  return worst;
}

}  // namespace jetlag
