#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "jetlag/autodiff.hpp"

namespace jetlag {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// p = dim T (temporal), n = dim M (spatial).
struct Dims {
  std::size_t p = 1;
  std::size_t n = 1;

  Dims() = default;
  Dims(std::size_t p_, std::size_t n_) : p(p_), n(n_) {
    if (p == 0 || n == 0) throw DimensionError("dims must satisfy p >= 1 and n >= 1");
  }

  std::size_t vertical() const { return n * p; }
  std::size_t total() const { return p + n + n * p; }
  /// Flattened vertical index of x^i_alpha.
  std::size_t vidx(std::size_t i, std::size_t alpha) const { return i * p + alpha; }

  friend bool operator==(const Dims&, const Dims&) = default;
};

/// A point (t^alpha, x^i, x^i_alpha) of the 1-jet bundle, over scalar type T.
/// Velocities are stored flattened: v[i * p + alpha] holds x^i_alpha.
template <class T>
struct JetPointT {
  Dims dims;
  std::vector<T> t;
  std::vector<T> x;
  std::vector<T> v;

  JetPointT() = default;
  explicit JetPointT(Dims d)
      : dims(d), t(d.p, ad::constant<T>(0.0)), x(d.n, ad::constant<T>(0.0)),
        v(d.vertical(), ad::constant<T>(0.0)) {}

  const T& vel(std::size_t i, std::size_t alpha) const { return v[dims.vidx(i, alpha)]; }
  T& vel(std::size_t i, std::size_t alpha) { return v[dims.vidx(i, alpha)]; }
};

using JetPoint = JetPointT<double>;

/// Build a double jet point from plain vectors; v is given in i-major order.
JetPoint make_point(Dims dims, std::vector<double> t, std::vector<double> x,
                    std::vector<double> v);

/// Names one coordinate of J^1(T,M).
struct Coord {
  enum class Kind { Time, Space, Velocity };
  Kind kind = Kind::Time;
  std::size_t i = 0;      // spatial index (Space, Velocity)
  std::size_t alpha = 0;  // temporal index (Time, Velocity)

  static Coord time(std::size_t alpha) { return {Kind::Time, 0, alpha}; }
  static Coord space(std::size_t i) { return {Kind::Space, i, 0}; }
  static Coord velocity(std::size_t i, std::size_t alpha) { return {Kind::Velocity, i, alpha}; }

  /// Position in the flat ordering t..., x..., v...
  std::size_t flat(const Dims& d) const;
  static Coord from_flat(const Dims& d, std::size_t k);
  std::string name() const;

  friend bool operator==(const Coord&, const Coord&) = default;
};

template <class T>
const T& coord_ref(const JetPointT<T>& pt, const Coord& c) {
  switch (c.kind) {
    case Coord::Kind::Time: return pt.t[c.alpha];
    case Coord::Kind::Space: return pt.x[c.i];
    default: return pt.v[pt.dims.vidx(c.i, c.alpha)];
  }
}

template <class T>
T& coord_ref(JetPointT<T>& pt, const Coord& c) {
  switch (c.kind) {
    case Coord::Kind::Time: return pt.t[c.alpha];
    case Coord::Kind::Space: return pt.x[c.i];
    default: return pt.v[pt.dims.vidx(c.i, c.alpha)];
  }
}

/// Apply fn(i_flat, value&) to every coordinate in flat order.
template <class T, class Fn>
void for_each_coord(JetPointT<T>& pt, Fn&& fn) {
  std::size_t k = 0;
  for (auto& a : pt.t) fn(k++, a);
  for (auto& a : pt.x) fn(k++, a);
  for (auto& a : pt.v) fn(k++, a);
}

template <class T, class Fn>
void for_each_coord(const JetPointT<T>& pt, Fn&& fn) {
  std::size_t k = 0;
  for (const auto& a : pt.t) fn(k++, a);
  for (const auto& a : pt.x) fn(k++, a);
  for (const auto& a : pt.v) fn(k++, a);
}

/// Point over Dual<T> whose derivative part is the given direction
/// (indexed in flat coordinate order; missing entries are zero).
template <class T>
JetPointT<ad::Dual<T>> lift_dual(const JetPointT<T>& pt, const std::vector<T>& direction) {
  JetPointT<ad::Dual<T>> out;
  out.dims = pt.dims;
  out.t.resize(pt.t.size());
  out.x.resize(pt.x.size());
  out.v.resize(pt.v.size());
  std::size_t k = 0;
  auto put = [&](std::vector<ad::Dual<T>>& dst, const std::vector<T>& src) {
    for (std::size_t a = 0; a < src.size(); ++a, ++k) {
      dst[a].v = src[a];
      dst[a].d = k < direction.size() ? direction[k] : ad::constant<T>(0.0);
    }
  };
  put(out.t, pt.t);
  put(out.x, pt.x);
  put(out.v, pt.v);
  return out;
}

template <class T>
JetPointT<ad::Dual<T>> lift_dual(const JetPointT<T>& pt, const Coord& c) {
  std::vector<T> dir(pt.dims.total(), ad::constant<T>(0.0));
  dir[c.flat(pt.dims)] = ad::constant<T>(1.0);
  return lift_dual(pt, dir);
}

template <class T>
JetPointT<ad::HyperDual<T>> lift_hyper(const JetPointT<T>& pt, const Coord& c1, const Coord& c2) {
  JetPointT<ad::HyperDual<T>> out;
  out.dims = pt.dims;
  auto conv = [](const std::vector<T>& src) {
    std::vector<ad::HyperDual<T>> dst(src.size());
    for (std::size_t a = 0; a < src.size(); ++a) dst[a].v = src[a];
    return dst;
  };
  out.t = conv(pt.t);
  out.x = conv(pt.x);
  out.v = conv(pt.v);
  coord_ref(out, c1).e1 = ad::constant<T>(1.0);
  coord_ref(out, c2).e2 = ad::constant<T>(1.0);
  return out;
}

/// Hyper-dual point seeded with arbitrary first-order directions.
template <class T>
JetPointT<ad::HyperDual<T>> lift_hyper(const JetPointT<T>& pt, const std::vector<T>& d1,
                                        const std::vector<T>& d2) {
  JetPointT<ad::HyperDual<T>> out;
  out.dims = pt.dims;
  out.t.resize(pt.t.size());
  out.x.resize(pt.x.size());
  out.v.resize(pt.v.size());
  std::size_t k = 0;
  auto put = [&](std::vector<ad::HyperDual<T>>& dst, const std::vector<T>& src) {
    for (std::size_t a = 0; a < src.size(); ++a, ++k) {
      dst[a].v = src[a];
      dst[a].e1 = k < d1.size() ? d1[k] : ad::constant<T>(0.0);
      dst[a].e2 = k < d2.size() ? d2[k] : ad::constant<T>(0.0);
      dst[a].e12 = ad::constant<T>(0.0);
    }
  };
  put(out.t, pt.t);
  put(out.x, pt.x);
  put(out.v, pt.v);
  return out;
}

/// Drop derivative parts: the value point of a lifted point.
template <class T>
JetPointT<T> value_point(const JetPointT<ad::Dual<T>>& pt) {
  JetPointT<T> out;
  out.dims = pt.dims;
  auto conv = [](const std::vector<ad::Dual<T>>& src) {
    std::vector<T> dst(src.size());
    for (std::size_t a = 0; a < src.size(); ++a) dst[a] = src[a].v;
    return dst;
  };
  out.t = conv(pt.t);
  out.x = conv(pt.x);
  out.v = conv(pt.v);
  return out;
}

/// Convert a double point to scalar type T (zero sensitivities).
template <class T>
JetPointT<T> promote(const JetPoint& pt) {
  JetPointT<T> out;
  out.dims = pt.dims;
  auto conv = [](const std::vector<double>& src) {
    std::vector<T> dst;
    dst.reserve(src.size());
    for (double a : src) dst.push_back(ad::constant<T>(a));
    return dst;
  };
  out.t = conv(pt.t);
  out.x = conv(pt.x);
  out.v = conv(pt.v);
  return out;
}

inline JetPoint to_values(const JetPoint& pt) { return pt; }

template <class T>
JetPoint to_values(const JetPointT<T>& pt) {
  JetPoint out(pt.dims);
  for (std::size_t a = 0; a < pt.t.size(); ++a) out.t[a] = ad::value_of(pt.t[a]);
  for (std::size_t a = 0; a < pt.x.size(); ++a) out.x[a] = ad::value_of(pt.x[a]);
  for (std::size_t a = 0; a < pt.v.size(); ++a) out.v[a] = ad::value_of(pt.v[a]);
  return out;
}

}  // namespace jetlag
