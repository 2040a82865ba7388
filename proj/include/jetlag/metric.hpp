#pragma once

// Temporal metric h_{ab}(t), spatial metric fields g_{ij}, their Christoffel
// symbols and curvature tensors. Everything is generic over the scalar type
// so these can be differentiated again by the callers.
//
// Flat index layouts:
//   H^c_{ab}      -> (c * p + a) * p + b
//   H^c_{mab}     -> ((c * p + m) * p + a) * p + b
//   Gamma^l_{jk}  -> (l * n + j) * n + k
//   r^m_{kij}     -> ((m * n + k) * n + i) * n + j

#include <cmath>
#include <string>
#include <vector>

#include "jetlag/diff.hpp"
#include "jetlag/dsl.hpp"
#include "jetlag/linalg.hpp"
#include "jetlag/tensor.hpp"

namespace jetlag {

/// Matrix of DSL expressions evaluated entrywise.
class ExprMatrix {
 public:
  ExprMatrix() = default;
  ExprMatrix(std::size_t rows, std::size_t cols, std::vector<dsl::Expr> entries);
  static ExprMatrix parse(const std::vector<std::vector<std::string>>& text, const Dims& dims);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }
  const dsl::Expr& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  bool uses(dsl::Op var_kind) const;
  std::vector<std::vector<std::string>> text() const;

  template <class T>
  Mat<T> eval(const JetPointT<T>& pt) const {
    Mat<T> m(rows_, cols_);
    for (std::size_t k = 0; k < entries_.size(); ++k) m.a[k] = dsl::eval(entries_[k], pt);
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<dsl::Expr> entries_;
};

template <class T>
Mat<T> symmetrize(const Mat<T>& m) {
  Mat<T> r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) r(i, j) = 0.5 * (m(i, j) + m(j, i));
  return r;
}

/// Largest |m_ij - m_ji|.
double asymmetry(const Matrix& m);

inline constexpr double kSymmetryWarnThreshold = 1e-12;

/// Semi-Riemannian metric on the temporal manifold, depending on t only.
class TemporalMetric {
 public:
  /// diag(+1 x pos, -1 x neg).
  static TemporalMetric flat(std::size_t p, Signature sig);
  /// Entries must be expressions in t only.
  static TemporalMetric from_entries(ExprMatrix entries, Signature declared);

  std::size_t p() const { return p_; }
  bool is_flat() const { return flat_; }
  const Signature& declared_signature() const { return signature_; }
  const ExprMatrix& entries() const { return entries_; }

  /// h_{ab}(t), symmetrized.
  template <class T>
  Mat<T> lower(const std::vector<T>& t) const {
    if (flat_) {
      Mat<T> m(p_, p_);
      for (std::size_t a = 0; a < p_; ++a)
        m(a, a) = ad::constant<T>(a < static_cast<std::size_t>(signature_.pos) ? 1.0 : -1.0);
      return m;
    }
    JetPointT<T> pt(Dims(p_, 1));
    pt.t = t;
    return symmetrize(entries_.eval(pt));
  }

  template <class T>
  Mat<T> upper(const std::vector<T>& t) const {
    return inverse(lower(t));
  }

  /// Raw (unsymmetrized) entries at a double point.
  Matrix raw(const std::vector<double>& t) const;

 private:
  std::size_t p_ = 1;
  bool flat_ = true;
  Signature signature_{1, 0, 0};
  ExprMatrix entries_;
};

namespace detail {
template <class T>
std::vector<ad::Dual<T>> seed_time(const std::vector<T>& t, std::size_t a) {
  std::vector<ad::Dual<T>> out(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    out[k].v = t[k];
    out[k].d = ad::constant<T>(k == a ? 1.0 : 0.0);
  }
  return out;
}
}  // namespace detail

/// Partial derivatives d_a h_{bc}, laid out (a * p + b) * p + c.
template <class T>
std::vector<T> h_derivatives(const TemporalMetric& h, const std::vector<T>& t) {
  const std::size_t p = h.p();
  std::vector<T> out(p * p * p, ad::constant<T>(0.0));
  if (h.is_flat()) return out;
  for (std::size_t a = 0; a < p; ++a) {
    auto m = h.lower(detail::seed_time(t, a));
    for (std::size_t k = 0; k < p * p; ++k) out[a * p * p + k] = m.a[k].d;
  }
  return out;
}

/// H^c_{ab} = 1/2 h^{cm} (d_a h_{mb} + d_b h_{ma} - d_m h_{ab}).
template <class T>
std::vector<T> h_christoffel(const TemporalMetric& h, const std::vector<T>& t) {
  const std::size_t p = h.p();
  std::vector<T> out(p * p * p, ad::constant<T>(0.0));
  if (h.is_flat()) return out;
  auto dh = h_derivatives(h, t);
  auto hu = h.upper(t);
  auto D = [&](std::size_t a, std::size_t b, std::size_t c) -> const T& { return dh[(a * p + b) * p + c]; };
  for (std::size_t c = 0; c < p; ++c)
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a; b < p; ++b) {
        T s = ad::constant<T>(0.0);
        for (std::size_t m = 0; m < p; ++m) s = s + hu(c, m) * (D(a, m, b) + D(b, m, a) - D(m, a, b));
        out[(c * p + a) * p + b] = 0.5 * s;
        out[(c * p + b) * p + a] = out[(c * p + a) * p + b];
      }
  return out;
}

/// H^c_{mab} = d_b H^c_{ma} - d_a H^c_{mb} + H^e_{ma} H^c_{eb} - H^e_{mb} H^c_{ea}.
template <class T>
std::vector<T> h_curvature(const TemporalMetric& h, const std::vector<T>& t) {
  const std::size_t p = h.p();
  std::vector<T> out(p * p * p * p, ad::constant<T>(0.0));
  if (h.is_flat() || p == 1) return out;
  auto H = h_christoffel(h, t);
  std::vector<std::vector<T>> dH(p, std::vector<T>(p * p * p));
  for (std::size_t b = 0; b < p; ++b) {
    auto Hd = h_christoffel(h, detail::seed_time(t, b));
    for (std::size_t k = 0; k < Hd.size(); ++k) dH[b][k] = Hd[k].d;
  }
  auto I3 = [&](std::size_t c, std::size_t a, std::size_t b) { return (c * p + a) * p + b; };
  for (std::size_t c = 0; c < p; ++c)
    for (std::size_t m = 0; m < p; ++m)
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) {
          T s = dH[b][I3(c, m, a)] - dH[a][I3(c, m, b)];
          for (std::size_t e = 0; e < p; ++e) s = s + H[I3(e, m, a)] * H[I3(c, e, b)] - H[I3(e, m, b)] * H[I3(c, e, a)];
          out[((c * p + m) * p + a) * p + b] = s;
        }
  return out;
}

/// Unit direction along x^k in flat coordinate order.
template <class T>
std::vector<T> space_direction(const Dims& d, std::size_t k) {
  std::vector<T> dir(d.total(), ad::constant<T>(0.0));
  dir[d.p + k] = ad::constant<T>(1.0);
  return dir;
}

/// Christoffel process given g and its derivatives dg[k] = D_k g along n
/// directions (plain or adapted).
template <class T>
std::vector<T> christoffel_from_derivatives(const Mat<T>& g, const std::vector<Mat<T>>& dg) {
  const std::size_t n = g.rows;
  Mat<T> gu = inverse(g);
  std::vector<T> out(n * n * n, ad::constant<T>(0.0));
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        T s = ad::constant<T>(0.0);
        for (std::size_t i = 0; i < n; ++i) s = s + gu(l, i) * (dg[k](i, j) + dg[j](i, k) - dg[i](j, k));
        out[(l * n + j) * n + k] = 0.5 * s;
        out[(l * n + k) * n + j] = out[(l * n + j) * n + k];
      }
  return out;
}

/// Gamma^l_{jk} = (g^{li}/2)(d_k g_{ij} + d_j g_{ik} - d_i g_{jk}) for a
/// metric field gfn(JetPointT<S>) -> Mat<S>, using plain x-partials.
template <class T, class GFn>
std::vector<T> spatial_christoffel(const GFn& gfn, const JetPointT<T>& pt) {
  const std::size_t n = pt.dims.n;
  std::vector<Mat<T>> dg;
  dg.reserve(n);
  Mat<T> g;
  for (std::size_t k = 0; k < n; ++k) {
    auto [val, der] = value_and_directional(gfn, pt, space_direction<T>(pt.dims, k));
    if (k == 0) g = std::move(val);
    dg.push_back(std::move(der));
  }
  return christoffel_from_derivatives(g, dg);
}

/// r^m_{kij} = d_j Gamma^m_{ki} - d_i Gamma^m_{kj} + Gamma^l_{ki} Gamma^m_{lj} - Gamma^l_{kj} Gamma^m_{li}.
template <class T, class GFn>
std::vector<T> spatial_curvature(const GFn& gfn, const JetPointT<T>& pt) {
  const std::size_t n = pt.dims.n;
  auto G = spatial_christoffel(gfn, pt);
  std::vector<std::vector<T>> dG(n);
  auto gamma_fn = [&](const auto& q) { return spatial_christoffel(gfn, q); };
  for (std::size_t j = 0; j < n; ++j) dG[j] = directional(gamma_fn, pt, space_direction<T>(pt.dims, j));
  auto I3 = [&](std::size_t l, std::size_t a, std::size_t b) { return (l * n + a) * n + b; };
  std::vector<T> out(n * n * n * n, ad::constant<T>(0.0));
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          T s = dG[j][I3(m, k, i)] - dG[i][I3(m, k, j)];
          for (std::size_t l = 0; l < n; ++l) s = s + G[I3(l, k, i)] * G[I3(m, l, j)] - G[I3(l, k, j)] * G[I3(m, l, i)];
          out[((m * n + k) * n + i) * n + j] = s;
        }
  return out;
}

/// Spatial metric d-tensor given by expressions (velocity terms allowed).
class SpatialMetricField {
 public:
  SpatialMetricField() = default;
  explicit SpatialMetricField(ExprMatrix entries) : entries_(std::move(entries)) {}
  const ExprMatrix& entries() const { return entries_; }

  template <class T>
  Mat<T> operator()(const JetPointT<T>& pt) const {
    return symmetrize(entries_.eval(pt));
  }

 private:
  ExprMatrix entries_;
};

/// Inverse through partial-pivot LU. Throws DegeneracyError when
/// |det m| <= 1e-10 (max |m_ij|)^dim.
Matrix invert_metric(const Matrix& m);

// DTensor-valued entry points at double points.
DTensor h_christoffel_tensor(const TemporalMetric& h, const std::vector<double>& t);
DTensor h_curvature_tensor(const TemporalMetric& h, const std::vector<double>& t);
DTensor g_christoffel_tensor(const SpatialMetricField& g, const JetPoint& pt);
DTensor g_curvature_tensor(const SpatialMetricField& g, const JetPoint& pt);

/// Symmetric, nondegenerate, declared signature at the given time samples.
struct TemporalMetricCheck {
  bool ok = true;
  double max_asymmetry = 0.0;
  double min_abs_det = HUGE_VAL;
  std::string diagnostic;
};
TemporalMetricCheck check_temporal_metric(const TemporalMetric& h, const std::vector<std::vector<double>>& samples);

}  // namespace jetlag
