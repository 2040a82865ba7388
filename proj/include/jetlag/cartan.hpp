#pragma once

// h-normal linear connections on the jet space, determined by four
// coefficient families (H, G, L, C), and their covariant derivatives.
//
// Flat layouts (i, j, k, l spatial; a, b, c temporal):
//   H^c_{ab}         (c * p + a) * p + b
//   G^k_{jc}         (k * n + j) * p + c
//   L^i_{jk}         (i * n + j) * n + k
//   C^{i(c)}_{j(k)}  ((i * n + j) * n + k) * p + c

#include <string>
#include <vector>

#include "jetlag/space.hpp"
#include "jetlag/tensor.hpp"

namespace jetlag {

enum class PackKind { Cartan, Berwald };

std::string to_string(PackKind k);

enum class CoefficientFamily { H, G, L, C };

std::string to_string(CoefficientFamily f);

class LinearConnectionPack {
 public:
  /// Cartan canonical connection over the given nonlinear connection.
  static LinearConnectionPack cartan(const NonlinearConnection& conn);
  /// Berwald connection of the metric pair (h, g) over (-H x, Gamma x).
  static LinearConnectionPack berwald(const Space& space);

  PackKind kind() const { return kind_; }
  const NonlinearConnection& connection() const { return conn_; }
  const Space& space() const { return conn_.space(); }

  /// Add a constant to one coefficient (fault injection for probes).
  void perturb(CoefficientFamily family, std::size_t flat_index, double delta);

  template <class T>
  std::vector<T> H(const JetPointT<T>& pt) const {
    return apply(CoefficientFamily::H, h_christoffel(space().h(), pt.t));
  }

  template <class T>
  std::vector<T> G(const JetPointT<T>& pt) const {
    const Dims& d = space().dims();
    const std::size_t n = d.n, p = d.p;
    std::vector<T> out(n * n * p, ad::constant<T>(0.0));
    if (kind_ == PackKind::Cartan) {
      auto gf = [this](const auto& q) { return space().g(q); };
      Mat<T> gu = inverse(space().g(pt));
      for (std::size_t c = 0; c < p; ++c) {
        Mat<T> dg = conn_.derivative(gf, pt, FrameDirection::temporal(c));
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t j = 0; j < n; ++j) {
            T s = ad::constant<T>(0.0);
            for (std::size_t i = 0; i < n; ++i) s = s + gu(k, i) * dg(i, j);
            out[(k * n + j) * p + c] = 0.5 * s;
          }
      }
    }
    return apply(CoefficientFamily::G, std::move(out));
  }

  template <class T>
  std::vector<T> L(const JetPointT<T>& pt) const {
    const Dims& d = space().dims();
    auto gf = [this](const auto& q) { return space().g(q); };
    if (kind_ == PackKind::Berwald) return apply(CoefficientFamily::L, spatial_christoffel(gf, pt));
    std::vector<Mat<T>> dg;
    for (std::size_t k = 0; k < d.n; ++k) dg.push_back(conn_.derivative(gf, pt, FrameDirection::spatial(k)));
    return apply(CoefficientFamily::L, christoffel_from_derivatives(space().g(pt), dg));
  }

  template <class T>
  std::vector<T> C(const JetPointT<T>& pt) const {
    const Dims& d = space().dims();
    const std::size_t n = d.n, p = d.p;
    std::vector<T> out(n * n * n * p, ad::constant<T>(0.0));
    if (kind_ == PackKind::Cartan) {
      auto gf = [this](const auto& q) { return space().g(q); };
      Mat<T> g = space().g(pt);
      for (std::size_t c = 0; c < p; ++c) {
        std::vector<Mat<T>> dg;
        for (std::size_t k = 0; k < n; ++k) dg.push_back(directional(gf, pt, velocity_direction<T>(d, k, c)));
        auto Cc = christoffel_from_derivatives(g, dg);
        for (std::size_t q = 0; q < n * n * n; ++q) out[q * p + c] = Cc[q];
      }
    }
    return apply(CoefficientFamily::C, std::move(out));
  }

 private:
  LinearConnectionPack(PackKind kind, NonlinearConnection conn) : kind_(kind), conn_(std::move(conn)) {}

  template <class T>
  std::vector<T> apply(CoefficientFamily f, std::vector<T> v) const {
    for (const auto& p : perturbations_)
      if (p.family == f) v.at(p.index) = v.at(p.index) + p.delta;
    return v;
  }

  struct Perturbation {
    CoefficientFamily family;
    std::size_t index;
    double delta;
  };

  PackKind kind_;
  NonlinearConnection conn_;
  std::vector<Perturbation> perturbations_;
};

/// Direction of a covariant derivative: T-horizontal "/c", M-horizontal
/// "|k" and vertical "|^{(c)}_{(k)}".
struct CovDirection {
  enum class Kind { THorizontal, MHorizontal, Vertical };
  Kind kind = Kind::MHorizontal;
  std::size_t k = 0;
  std::size_t c = 0;

  static CovDirection t_horizontal(std::size_t c) { return {Kind::THorizontal, 0, c}; }
  static CovDirection m_horizontal(std::size_t k) { return {Kind::MHorizontal, k, 0}; }
  static CovDirection vertical(std::size_t k, std::size_t c) { return {Kind::Vertical, k, c}; }

  FrameDirection frame() const;
};

/// Connection coefficients along one covariant direction at a point:
/// spatial(l, m) is the Gamma^l_{m.} acting on spatial indices and
/// temporal(a, b) the one acting on temporal indices.
struct DirectionCoefficients {
  Matrix spatial;
  Matrix temporal;
};

DirectionCoefficients direction_coefficients(const LinearConnectionPack& pack, const JetPoint& pt, const CovDirection& dir);

/// Add the connection terms of every slot to an adapted derivative.
/// `values` and `adapted` are row-major over `valence`.
std::vector<double> add_connection_terms(const std::vector<IndexSlot>& valence, const std::vector<double>& values,
                                         std::vector<double> adapted, const DirectionCoefficients& coef,
                                         const Dims& dims);

/// Covariant derivative of a field with the given valence. The field is a
/// callable JetPointT<S> -> std::vector<S> (or Mat<S>) for all scalar types.
template <class Fn>
std::vector<double> covariant_derivative(const Fn& field, const std::vector<IndexSlot>& valence, const CovDirection& dir,
                                         const LinearConnectionPack& pack, const JetPoint& pt) {
  auto flat = [](const auto& r) {
    if constexpr (requires { r.a; }) return r.a;
    else return r;
  };
  std::size_t expected = 1;
  for (const auto& s : valence) expected *= s.extent;
  auto values = flat(field(pt));
  if (values.size() != expected) throw ContractionError("field size does not match valence");
  auto adapted = flat(pack.connection().derivative(field, pt, dir.frame()));
  return add_connection_terms(valence, values, std::move(adapted), direction_coefficients(pack, pt, dir), pt.dims);
}

/// Largest |D g| and |D h| over every index and direction, per operator.
struct CompatibilityReport {
  double g_t = 0.0;  // g_{ij/c}
  double g_m = 0.0;  // g_{ij|k}
  double g_v = 0.0;  // g_{ij}|^{(c)}_{(k)}
  double h_t = 0.0;  // h_{ab/c}
  double h_m = 0.0;  // h_{ab|k}
  double h_v = 0.0;  // h_{ab}|^{(c)}_{(k)}
  double max() const;
};

CompatibilityReport metric_compatibility(const LinearConnectionPack& pack, const JetPoint& pt);

/// Re-derive G, L, C from metric compatibility plus the symmetry
/// conditions by least squares and compare with the pack.
struct ProbeBlock {
  double mismatch = 0.0;
  std::vector<std::size_t> worst_index;
};

struct UniquenessReport {
  ProbeBlock G, L, C;
  double max() const;
  bool passed(double tol) const { return max() <= tol; }
};

UniquenessReport uniqueness_probe(const LinearConnectionPack& pack, const std::vector<JetPoint>& points);

/// Coefficient families as DTensors with their valences.
DTensor pack_tensor(const LinearConnectionPack& pack, CoefficientFamily f, const JetPoint& pt);

}  // namespace jetlag
