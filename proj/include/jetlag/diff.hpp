#pragma once

// Generic forward-mode derivative drivers. A "field" here is any callable
// accepting JetPointT<S> for every scalar S it is instantiated with and
// returning either S or std::vector<S>.

#include <type_traits>
#include <utility>
#include <vector>

#include "jetlag/jet.hpp"
#include "jetlag/linalg.hpp"

namespace jetlag {

namespace detail {
template <class E, class M>
Mat<E> rebind_mat(const M& m) {
  return Mat<E>(m.rows, m.cols);
}

template <class R>
struct is_vector : std::false_type {};
template <class E, class A>
struct is_vector<std::vector<E, A>> : std::true_type {};

// Apply `part` to every scalar of a field result: a scalar, a std::vector,
// or a matrix-like aggregate with rows, cols and storage `a`.
template <class R, class Part>
auto map_parts(const R& r, Part&& part) {
  if constexpr (is_vector<R>::value) {
    using E = decltype(part(r[0]));
    std::vector<E> out;
    out.reserve(r.size());
    for (const auto& x : r) out.push_back(part(x));
    return out;
  } else if constexpr (requires { r.a; r.rows; r.cols; }) {
    using E = decltype(part(r.a[0]));
    auto out = rebind_mat<E>(r);
    for (std::size_t k = 0; k < r.a.size(); ++k) out.a[k] = part(r.a[k]);
    return out;
  } else {
    return part(r);
  }
}
}  // namespace detail

/// Derivative of f at pt along `direction` (flat coordinate order).
template <class T, class F>
auto directional(F&& f, const JetPointT<T>& pt, const std::vector<T>& direction) {
  auto r = f(lift_dual(pt, direction));
  return detail::map_parts(r, [](const auto& x) { return x.d; });
}

/// Value and directional derivative from one evaluation.
template <class T, class F>
auto value_and_directional(F&& f, const JetPointT<T>& pt, const std::vector<T>& direction) {
  auto r = f(lift_dual(pt, direction));
  return std::make_pair(detail::map_parts(r, [](const auto& x) { return x.v; }),
                        detail::map_parts(r, [](const auto& x) { return x.d; }));
}

template <class T, class F>
auto partial(F&& f, const JetPointT<T>& pt, const Coord& c) {
  std::vector<T> dir(pt.dims.total(), ad::constant<T>(0.0));
  dir[c.flat(pt.dims)] = ad::constant<T>(1.0);
  return directional(f, pt, dir);
}

/// Mixed second partial d^2 f / (dc1 dc2) from one hyper-dual evaluation.
template <class T, class F>
auto second_partial(F&& f, const JetPointT<T>& pt, const Coord& c1, const Coord& c2) {
  auto r = f(lift_hyper(pt, c1, c2));
  return detail::map_parts(r, [](const auto& x) { return x.e12; });
}

/// Second derivative along two arbitrary directions, d^2 f[d1, d2].
template <class T, class F>
auto second_directional(F&& f, const JetPointT<T>& pt, const std::vector<T>& d1, const std::vector<T>& d2) {
  auto r = f(lift_hyper(pt, d1, d2));
  return detail::map_parts(r, [](const auto& x) { return x.e12; });
}

}  // namespace jetlag
