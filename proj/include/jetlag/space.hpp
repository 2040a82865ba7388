#pragma once

// The geometry engine of a multi-time Lagrange space: vertical Hessian, the
// electrodynamics components g, U, F, the spray and its pieces, the
// canonical nonlinear connection and the adapted frame.
//
// Flat layouts (l, i, j spatial; a, b temporal):
//   vertical Hessian       Mat np x np, row/col vidx(i, a)
//   U                      Mat n x p, U(i, a) = U^{(a)}_{(i)}
//   U curl U^{(a)}_{(i)j}  (i * n + j) * p + a
//   G, H, M  ^{(l)}_{(a)b} (l * p + a) * p + b
//   N ^{(l)}_{(a)j}        (l * p + a) * n + j

#include <string>
#include <vector>

#include "jetlag/diff.hpp"
#include "jetlag/lagrangian.hpp"
#include "jetlag/metric.hpp"

namespace jetlag {

template <class T>
std::vector<T> time_direction(const Dims& d, std::size_t a) {
  std::vector<T> dir(d.total(), ad::constant<T>(0.0));
  dir[a] = ad::constant<T>(1.0);
  return dir;
}

template <class T>
std::vector<T> velocity_direction(const Dims& d, std::size_t i, std::size_t a) {
  std::vector<T> dir(d.total(), ad::constant<T>(0.0));
  dir[d.p + d.n + d.vidx(i, a)] = ad::constant<T>(1.0);
  return dir;
}

template <class T>
JetPointT<T> with_zero_velocity(const JetPointT<T>& pt) {
  JetPointT<T> q = pt;
  for (auto& c : q.v) c = ad::constant<T>(0.0);
  return q;
}

/// Pieces of the spray G^k = S^k + H^k + J^k: S collects the x-derivative
/// terms, H the explicit time dependence and J the h-Laplacian correction.
template <class T>
struct SprayParts {
  std::vector<T> S, H, J, G;
};

/// Euler-Lagrange brackets: EL_i = 2 G^{ab}_{ij} x^j_{ab} + spatial_i + temporal_i.
template <class T>
struct ELBrackets {
  std::vector<T> spatial;   // d2L/dx^j dv^i_a x^j_a - dL/dx^i
  std::vector<T> temporal;  // d2L/dt^a dv^i_a + dL/dv^i_a H^c_{ac}
};

class Space {
 public:
  explicit Space(LagrangianModel model) : model_(std::move(model)) {}

  const LagrangianModel& model() const { return model_; }
  const Dims& dims() const { return model_.dims(); }
  const TemporalMetric& h() const { return model_.h(); }

  template <class T>
  T L(const JetPointT<T>& pt) const {
    return model_(pt);
  }

  /// G^{(a)(b)}_{(i)(j)} = 1/2 d2L / dv^i_a dv^j_b.
  template <class T>
  Mat<T> vertical_hessian(const JetPointT<T>& pt) const {
    const Dims& d = dims();
    const std::size_t m = d.vertical();
    Mat<T> out(m, m);
    auto f = [this](const auto& q) { return model_(q); };
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = r; c < m; ++c) {
        auto dr = velocity_direction<T>(d, r / d.p, r % d.p);
        auto dc = velocity_direction<T>(d, c / d.p, c % d.p);
        out(r, c) = 0.5 * second_directional(f, pt, dr, dc);
        out(c, r) = out(r, c);
      }
    return out;
  }

  /// g_ij: declared for the builtin families, otherwise the h-trace of the
  /// vertical Hessian, (1/p) h_{ab} G^{(a)(b)}_{(i)(j)}.
  template <class T>
  Mat<T> g(const JetPointT<T>& pt) const {
    if (model_.builtin()) return model_.declared_g(pt);
    const Dims& d = dims();
    Mat<T> G = vertical_hessian(pt);
    Mat<T> hl = h().lower(pt.t);
    Mat<T> out(d.n, d.n);
    for (std::size_t i = 0; i < d.n; ++i)
      for (std::size_t j = 0; j < d.n; ++j) {
        T s = ad::constant<T>(0.0);
        for (std::size_t a = 0; a < d.p; ++a)
          for (std::size_t b = 0; b < d.p; ++b) s = s + hl(a, b) * G(d.vidx(i, a), d.vidx(j, b));
        out(i, j) = s / static_cast<double>(d.p);
      }
    return out;
  }

  /// U^{(a)}_{(i)} = dL/dv^i_a at zero velocity for expressions.
  template <class T>
  Mat<T> U(const JetPointT<T>& pt) const {
    if (model_.builtin()) return model_.declared_U(pt);
    const Dims& d = dims();
    JetPointT<T> q = with_zero_velocity(pt);
    auto f = [this](const auto& s) { return model_(s); };
    Mat<T> out(d.n, d.p);
    for (std::size_t i = 0; i < d.n; ++i)
      for (std::size_t a = 0; a < d.p; ++a) out(i, a) = directional(f, q, velocity_direction<T>(d, i, a));
    return out;
  }

  template <class T>
  T F(const JetPointT<T>& pt) const {
    if (model_.builtin()) return model_.declared_F(pt);
    return model_(with_zero_velocity(pt));
  }

  /// U^{(a)}_{(i)j} = d_j U^{(a)}_{(i)} - d_i U^{(a)}_{(j)}.
  template <class T>
  std::vector<T> U_curl(const JetPointT<T>& pt) const {
    const Dims& d = dims();
    const std::size_t n = d.n, p = d.p;
    auto uf = [this](const auto& q) { return U(q); };
    std::vector<Mat<T>> dU;
    for (std::size_t j = 0; j < n; ++j) dU.push_back(directional(uf, pt, space_direction<T>(d, j)));
    std::vector<T> out(n * n * p, ad::constant<T>(0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t a = 0; a < p; ++a) out[(i * n + j) * p + a] = dU[j](i, a) - dU[i](j, a);
    return out;
  }

  /// H^c_{ac} contracted, one entry per a.
  template <class T>
  std::vector<T> h_trace(const std::vector<T>& t) const {
    const std::size_t p = dims().p;
    auto H = h_christoffel(h(), t);
    std::vector<T> out(p, ad::constant<T>(0.0));
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t c = 0; c < p; ++c) out[a] = out[a] + H[(c * p + a) * p + c];
    return out;
  }

  template <class T>
  ELBrackets<T> el_brackets(const JetPointT<T>& pt) const {
    const Dims& d = dims();
    const std::size_t n = d.n, p = d.p;
    auto f = [this](const auto& q) { return model_(q); };
    auto Htr = h_trace(pt.t);
    ELBrackets<T> out{std::vector<T>(n, ad::constant<T>(0.0)), std::vector<T>(n, ad::constant<T>(0.0))};
    for (std::size_t i = 0; i < n; ++i) {
      out.spatial[i] = -directional(f, pt, space_direction<T>(d, i));
      for (std::size_t a = 0; a < p; ++a) {
        auto dv = velocity_direction<T>(d, i, a);
        std::vector<T> flow(d.total(), ad::constant<T>(0.0));
        for (std::size_t j = 0; j < n; ++j) flow[p + j] = pt.vel(j, a);
        auto rs = f(lift_hyper(pt, dv, flow));
        out.spatial[i] = out.spatial[i] + rs.e12;
        auto rt = f(lift_hyper(pt, dv, time_direction<T>(d, a)));
        out.temporal[i] = out.temporal[i] + rt.e12 + rt.e1 * Htr[a];
      }
    }
    return out;
  }

  template <class T>
  SprayParts<T> spray(const JetPointT<T>& pt) const {
    const Dims& d = dims();
    const std::size_t n = d.n, p = d.p;
    auto br = el_brackets(pt);
    Mat<T> gu = inverse(g(pt));
    Mat<T> hu = h().upper(pt.t);
    auto H = h_christoffel(h(), pt.t);
    SprayParts<T> s;
    s.S.assign(n, ad::constant<T>(0.0));
    s.H.assign(n, ad::constant<T>(0.0));
    s.J.assign(n, ad::constant<T>(0.0));
    s.G.assign(n, ad::constant<T>(0.0));
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        s.S[k] = s.S[k] + 0.25 * gu(k, i) * br.spatial[i];
        s.H[k] = s.H[k] + 0.25 * gu(k, i) * br.temporal[i];
      }
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b)
          for (std::size_t c = 0; c < p; ++c) s.J[k] = s.J[k] + 0.5 * hu(a, b) * H[(c * p + a) * p + b] * pt.vel(k, c);
      s.G[k] = s.S[k] + s.H[k] + s.J[k];
    }
    return s;
  }

  template <class T>
  std::vector<T> spray_G(const JetPointT<T>& pt) const {
    return spray(pt).G;
  }

  /// T^l of the electrodynamics spray, p >= 2.
  template <class T>
  std::vector<T> spray_T(const JetPointT<T>& pt) const {
    const Dims& d = dims();
    const std::size_t n = d.n, p = d.p;
    auto gf = [this](const auto& q) { return g(q); };
    auto uf = [this](const auto& q) { return U(q); };
    auto ff = [this](const auto& q) { return F(q); };
    Mat<T> gm = g(pt);
    Mat<T> gu = inverse(gm);
    Mat<T> hu = h().upper(pt.t);
    Mat<T> Um = U(pt);
    auto curl = U_curl(pt);
    auto Htr = h_trace(pt.t);
    std::vector<Mat<T>> dg, dU;
    for (std::size_t a = 0; a < p; ++a) {
      dg.push_back(directional(gf, pt, time_direction<T>(d, a)));
      dU.push_back(directional(uf, pt, time_direction<T>(d, a)));
    }
    std::vector<T> bracket(n, ad::constant<T>(0.0));
    for (std::size_t i = 0; i < n; ++i) {
      T s = -directional(ff, pt, space_direction<T>(d, i));
      for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b)
          for (std::size_t j = 0; j < n; ++j) s = s + 2.0 * hu(a, b) * dg[a](i, j) * pt.vel(j, b);
        for (std::size_t j = 0; j < n; ++j) s = s + curl[(i * n + j) * p + a] * pt.vel(j, a);
        s = s + dU[a](i, a) + Um(i, a) * Htr[a];
      }
      bracket[i] = s;
    }
    std::vector<T> out(n, ad::constant<T>(0.0));
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t i = 0; i < n; ++i) out[l] = out[l] + 0.25 * gu(l, i) * bracket[i];
    return out;
  }

  /// Spatial spray G^{(l)}_{(a)b}.
  template <class T>
  std::vector<T> spatial_spray(const JetPointT<T>& pt) const {
    const Dims& d = dims();
    const std::size_t n = d.n, p = d.p;
    std::vector<T> out(n * p * p, ad::constant<T>(0.0));
    if (p == 1) {
      auto G = spray_G(pt);
      T h11 = h().lower(pt.t)(0, 0);
      for (std::size_t l = 0; l < n; ++l) out[l] = h11 * G[l];
      return out;
    }
    auto gf = [this](const auto& q) { return g(q); };
    auto Gam = spatial_christoffel(gf, pt);
    auto Tv = spray_T(pt);
    Mat<T> hl = h().lower(pt.t);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) {
          T s = hl(a, b) * Tv[l] / static_cast<double>(p);
          for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) s = s + 0.5 * Gam[(l * n + j) * n + k] * pt.vel(j, a) * pt.vel(k, b);
          out[(l * p + a) * p + b] = s;
        }
    return out;
  }

  /// Temporal spray H^{(l)}_{(a)b} = -1/2 H^c_{ab} x^l_c.
  template <class T>
  std::vector<T> temporal_spray(const JetPointT<T>& pt) const {
    auto M = canonical_M(pt);
    for (auto& m : M) m = 0.5 * m;
    return M;
  }

  /// M^{(l)}_{(a)b} = -H^c_{ab} x^l_c.
  template <class T>
  std::vector<T> canonical_M(const JetPointT<T>& pt) const {
    const Dims& d = dims();
    const std::size_t n = d.n, p = d.p;
    auto H = h_christoffel(h(), pt.t);
    std::vector<T> out(n * p * p, ad::constant<T>(0.0));
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) {
          T s = ad::constant<T>(0.0);
          for (std::size_t c = 0; c < p; ++c) s = s - H[(c * p + a) * p + b] * pt.vel(l, c);
          out[(l * p + a) * p + b] = s;
        }
    return out;
  }

  /// Canonical N^{(l)}_{(a)j}: h11 dG^l/dx^j_1 for p = 1, the closed form
  /// Gamma^l_{jk} x^k_a + (g^{lk}/2) d_a g_{jk} + (g^{lk}/4) h_{ac} U^{(c)}_{(k)j}
  /// for p >= 2.
  template <class T>
  std::vector<T> canonical_N(const JetPointT<T>& pt) const {
    const Dims& d = dims();
    const std::size_t n = d.n, p = d.p;
    std::vector<T> out(n * p * n, ad::constant<T>(0.0));
    if (p == 1) {
      auto gf = [this](const auto& q) { return spray_G(q); };
      T h11 = h().lower(pt.t)(0, 0);
      for (std::size_t j = 0; j < n; ++j) {
        auto dG = directional(gf, pt, velocity_direction<T>(d, j, 0));
        for (std::size_t l = 0; l < n; ++l) out[l * n + j] = h11 * dG[l];
      }
      return out;
    }
    auto gf = [this](const auto& q) { return g(q); };
    Mat<T> gm = g(pt);
    Mat<T> gu = inverse(gm);
    Mat<T> hl = h().lower(pt.t);
    auto Gam = spatial_christoffel(gf, pt);
    auto curl = U_curl(pt);
    for (std::size_t a = 0; a < p; ++a) {
      Mat<T> dg = directional(gf, pt, time_direction<T>(d, a));
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = 0; j < n; ++j) {
          T s = ad::constant<T>(0.0);
          for (std::size_t k = 0; k < n; ++k) {
            s = s + Gam[(l * n + j) * n + k] * pt.vel(k, a) + 0.5 * gu(l, k) * dg(j, k);
            for (std::size_t c = 0; c < p; ++c) s = s + 0.25 * gu(l, k) * hl(a, c) * curl[(k * n + j) * p + c];
          }
          out[(l * p + a) * n + j] = s;
        }
    }
    return out;
  }

  /// h_{ac} dG^l / dx^j_c, which agrees with the canonical N for
  /// electrodynamics Lagrangians.
  template <class T>
  std::vector<T> spray_derivative_N(const JetPointT<T>& pt) const {
    const Dims& d = dims();
    const std::size_t n = d.n, p = d.p;
    auto gf = [this](const auto& q) { return spray_G(q); };
    Mat<T> hl = h().lower(pt.t);
    std::vector<T> out(n * p * n, ad::constant<T>(0.0));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t c = 0; c < p; ++c) {
        auto dG = directional(gf, pt, velocity_direction<T>(d, j, c));
        for (std::size_t l = 0; l < n; ++l)
          for (std::size_t a = 0; a < p; ++a) out[(l * p + a) * n + j] = out[(l * p + a) * n + j] + hl(a, c) * dG[l];
      }
    return out;
  }

  /// Euler-Lagrange expression at a jet point given second derivatives
  /// x^j_{ab} laid out (j * p + a) * p + b.
  template <class T>
  std::vector<T> euler_lagrange(const JetPointT<T>& pt, const std::vector<T>& xab) const {
    const Dims& d = dims();
    const std::size_t n = d.n, p = d.p;
    auto br = el_brackets(pt);
    Mat<T> G = vertical_hessian(pt);
    std::vector<T> out(n, ad::constant<T>(0.0));
    for (std::size_t i = 0; i < n; ++i) {
      T s = br.spatial[i] + br.temporal[i];
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t a = 0; a < p; ++a)
          for (std::size_t b = 0; b < p; ++b) s = s + 2.0 * G(d.vidx(i, a), d.vidx(j, b)) * xab[(j * p + a) * p + b];
      out[i] = s;
    }
    return out;
  }

 private:
  LagrangianModel model_;
};

enum class NonlinearKind { Canonical, MetricPair, Zero };

std::string to_string(NonlinearKind k);

/// Directions of the adapted frame: delta/delta t^a, delta/delta x^i and
/// the vertical d/dx^i_a.
struct FrameDirection {
  enum class Kind { Temporal, Spatial, Vertical };
  Kind kind = Kind::Spatial;
  std::size_t i = 0;
  std::size_t a = 0;

  static FrameDirection temporal(std::size_t a) { return {Kind::Temporal, 0, a}; }
  static FrameDirection spatial(std::size_t i) { return {Kind::Spatial, i, 0}; }
  static FrameDirection vertical(std::size_t i, std::size_t a) { return {Kind::Vertical, i, a}; }
};

/// A nonlinear connection (M, N). Canonical uses the spray of the space;
/// MetricPair is (-H x, Gamma x) built from h and g alone; Zero is the
/// trivial one.
class NonlinearConnection {
 public:
  NonlinearConnection(const Space& space, NonlinearKind kind) : space_(&space), kind_(kind) {}

  NonlinearKind kind() const { return kind_; }
  const Space& space() const { return *space_; }

  template <class T>
  std::vector<T> M(const JetPointT<T>& pt) const {
    const Dims& d = space_->dims();
    if (kind_ == NonlinearKind::Zero) return std::vector<T>(d.n * d.p * d.p, ad::constant<T>(0.0));
    return space_->canonical_M(pt);
  }

  template <class T>
  std::vector<T> N(const JetPointT<T>& pt) const {
    const Dims& d = space_->dims();
    const std::size_t n = d.n, p = d.p;
    switch (kind_) {
      case NonlinearKind::Zero: return std::vector<T>(n * p * n, ad::constant<T>(0.0));
      case NonlinearKind::Canonical: return space_->canonical_N(pt);
      case NonlinearKind::MetricPair: break;
    }
    auto gf = [this](const auto& q) { return space_->g(q); };
    auto Gam = spatial_christoffel(gf, pt);
    std::vector<T> out(n * p * n, ad::constant<T>(0.0));
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t j = 0; j < n; ++j) {
          T s = ad::constant<T>(0.0);
          for (std::size_t k = 0; k < n; ++k) s = s + Gam[(l * n + j) * n + k] * pt.vel(k, a);
          out[(l * p + a) * n + j] = s;
        }
    return out;
  }

  /// Tangent vector of a frame direction in flat coordinates:
  /// delta/delta t^a = d/dt^a - M^{(j)}_{(b)a} d/dx^j_b,
  /// delta/delta x^i = d/dx^i - N^{(j)}_{(b)i} d/dx^j_b.
  template <class T>
  std::vector<T> seed(const JetPointT<T>& pt, const FrameDirection& dir) const {
    const Dims& d = space_->dims();
    const std::size_t n = d.n, p = d.p, off = p + n;
    std::vector<T> out(d.total(), ad::constant<T>(0.0));
    switch (dir.kind) {
      case FrameDirection::Kind::Vertical: out[off + d.vidx(dir.i, dir.a)] = ad::constant<T>(1.0); return out;
      case FrameDirection::Kind::Temporal: {
        out[dir.a] = ad::constant<T>(1.0);
        if (kind_ == NonlinearKind::Zero) return out;
        auto Mv = M(pt);
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t b = 0; b < p; ++b) out[off + d.vidx(j, b)] = -Mv[(j * p + b) * p + dir.a];
        return out;
      }
      case FrameDirection::Kind::Spatial: {
        out[p + dir.i] = ad::constant<T>(1.0);
        if (kind_ == NonlinearKind::Zero) return out;
        auto Nv = N(pt);
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t b = 0; b < p; ++b) out[off + d.vidx(j, b)] = -Nv[(j * p + b) * n + dir.i];
        return out;
      }
    }
    return out;
  }

  /// Derivative of a field along a frame direction.
  template <class T, class Fn>
  auto derivative(const Fn& f, const JetPointT<T>& pt, const FrameDirection& dir) const {
    return directional(f, pt, seed(pt, dir));
  }

 private:
  const Space* space_;
  NonlinearKind kind_;
};

/// Sasakian-type metric h_{ab} dt dt + g_ij dx dx + h^{ab} g_ij dx_a dx_b in
/// the adapted frame, ordered (t, x, v) like flat coordinates.
Matrix sasakian_metric(const Space& space, const JetPoint& pt);

}  // namespace jetlag
