#pragma once

// Forward-mode differentiation scalars.
//
// Dual<T> carries one first-order sensitivity. HyperDual<T> carries two
// first-order sensitivities and the mixed second-order one, so a single
// evaluation yields d^2 f / (da db). Both nest: HyperDual<Dual<double>>
// differentiates a Hessian once more.

#include <cmath>
#include <type_traits>

namespace jetlag::ad {

template <class T>
struct Dual {
  T v{};
  T d{};
};

template <class T>
struct HyperDual {
  T v{};
  T e1{};
  T e2{};
  T e12{};
};

template <class T>
struct is_ad : std::false_type {};
template <class T>
struct is_ad<Dual<T>> : std::true_type {};
template <class T>
struct is_ad<HyperDual<T>> : std::true_type {};
template <class T>
inline constexpr bool is_ad_v = is_ad<T>::value;

// Lift a plain value into scalar type T with zero sensitivities.
template <class T>
T constant(double c) {
  if constexpr (std::is_same_v<T, double>) {
    return c;
  } else {
    T r{};
    r.v = constant<decltype(r.v)>(c);
    return r;
  }
}

// ---- declarations (all overloads visible to every definition below) ----

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& a);
template <class T>
double value_of(const HyperDual<T>& a);

inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double sinh(double x) { return std::sinh(x); }
inline double cosh(double x) { return std::cosh(x); }
inline double abs(double x) { return std::abs(x); }
inline double tan(double x) { return std::tan(x); }

template <class T> Dual<T> sin(const Dual<T>&);
template <class T> Dual<T> cos(const Dual<T>&);
template <class T> Dual<T> exp(const Dual<T>&);
template <class T> Dual<T> log(const Dual<T>&);
template <class T> Dual<T> sqrt(const Dual<T>&);
template <class T> Dual<T> sinh(const Dual<T>&);
template <class T> Dual<T> cosh(const Dual<T>&);
template <class T> Dual<T> abs(const Dual<T>&);
template <class T> Dual<T> tan(const Dual<T>&);
template <class T> HyperDual<T> sin(const HyperDual<T>&);
template <class T> HyperDual<T> cos(const HyperDual<T>&);
template <class T> HyperDual<T> exp(const HyperDual<T>&);
template <class T> HyperDual<T> log(const HyperDual<T>&);
template <class T> HyperDual<T> sqrt(const HyperDual<T>&);
template <class T> HyperDual<T> sinh(const HyperDual<T>&);
template <class T> HyperDual<T> cosh(const HyperDual<T>&);
template <class T> HyperDual<T> abs(const HyperDual<T>&);
template <class T> HyperDual<T> tan(const HyperDual<T>&);

// ---- Dual arithmetic ----

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T>
Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}
template <class T>
Dual<T> operator+(const Dual<T>& a, double b) { return {a.v + b, a.d}; }
template <class T>
Dual<T> operator+(double a, const Dual<T>& b) { return {a + b.v, b.d}; }
template <class T>
Dual<T> operator-(const Dual<T>& a, double b) { return {a.v - b, a.d}; }
template <class T>
Dual<T> operator-(double a, const Dual<T>& b) { return {a - b.v, -b.d}; }
template <class T>
Dual<T> operator*(const Dual<T>& a, double b) { return {a.v * b, a.d * b}; }
template <class T>
Dual<T> operator*(double a, const Dual<T>& b) { return {a * b.v, a * b.d}; }
template <class T>
Dual<T> operator/(const Dual<T>& a, double b) { return {a.v / b, a.d / b}; }
template <class T>
Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>{constant<T>(a), T{}} / b; }
template <class T>
Dual<T>& operator+=(Dual<T>& a, const Dual<T>& b) { return a = a + b; }
template <class T>
Dual<T>& operator-=(Dual<T>& a, const Dual<T>& b) { return a = a - b; }
template <class T>
Dual<T>& operator*=(Dual<T>& a, const Dual<T>& b) { return a = a * b; }

// f(a) given f(a.v) and f'(a.v)
template <class T>
Dual<T> chain(const Dual<T>& a, const T& f0, const T& f1) { return {f0, f1 * a.d}; }

template <class T> Dual<T> sin(const Dual<T>& a) { return chain(a, ad::sin(a.v), ad::cos(a.v)); }
template <class T> Dual<T> cos(const Dual<T>& a) { return chain(a, ad::cos(a.v), -ad::sin(a.v)); }
template <class T> Dual<T> exp(const Dual<T>& a) { T e = ad::exp(a.v); return chain(a, e, e); }
template <class T> Dual<T> log(const Dual<T>& a) { return chain(a, ad::log(a.v), 1.0 / a.v); }
template <class T> Dual<T> sqrt(const Dual<T>& a) { T s = ad::sqrt(a.v); return chain(a, s, 0.5 / s); }
template <class T> Dual<T> sinh(const Dual<T>& a) { return chain(a, ad::sinh(a.v), ad::cosh(a.v)); }
template <class T> Dual<T> cosh(const Dual<T>& a) { return chain(a, ad::cosh(a.v), ad::sinh(a.v)); }
template <class T> Dual<T> abs(const Dual<T>& a) { return value_of(a.v) < 0.0 ? -a : a; }
template <class T> Dual<T> tan(const Dual<T>& a) {
  T t = ad::tan(a.v);
  return chain(a, t, 1.0 + t * t);
}

template <class T>
double value_of(const Dual<T>& a) { return value_of(a.v); }

// ---- HyperDual arithmetic ----

template <class T>
HyperDual<T> operator+(const HyperDual<T>& a, const HyperDual<T>& b) {
  return {a.v + b.v, a.e1 + b.e1, a.e2 + b.e2, a.e12 + b.e12};
}
template <class T>
HyperDual<T> operator-(const HyperDual<T>& a, const HyperDual<T>& b) {
  return {a.v - b.v, a.e1 - b.e1, a.e2 - b.e2, a.e12 - b.e12};
}
template <class T>
HyperDual<T> operator-(const HyperDual<T>& a) { return {-a.v, -a.e1, -a.e2, -a.e12}; }
template <class T>
HyperDual<T> operator*(const HyperDual<T>& a, const HyperDual<T>& b) {
  return {a.v * b.v, a.v * b.e1 + a.e1 * b.v, a.v * b.e2 + a.e2 * b.v,
          a.v * b.e12 + a.e1 * b.e2 + a.e2 * b.e1 + a.e12 * b.v};
}
template <class T>
HyperDual<T> operator/(const HyperDual<T>& a, const HyperDual<T>& b) {
  // a * (1/b), with 1/b expanded to second order
  T inv = 1.0 / b.v;
  T inv2 = inv * inv;
  HyperDual<T> r{inv, -b.e1 * inv2, -b.e2 * inv2,
                 -b.e12 * inv2 + 2.0 * b.e1 * b.e2 * inv2 * inv};
  return a * r;
}
template <class T>
HyperDual<T> operator+(const HyperDual<T>& a, double b) { return {a.v + b, a.e1, a.e2, a.e12}; }
template <class T>
HyperDual<T> operator+(double a, const HyperDual<T>& b) { return b + a; }
template <class T>
HyperDual<T> operator-(const HyperDual<T>& a, double b) { return {a.v - b, a.e1, a.e2, a.e12}; }
template <class T>
HyperDual<T> operator-(double a, const HyperDual<T>& b) { return {a - b.v, -b.e1, -b.e2, -b.e12}; }
template <class T>
HyperDual<T> operator*(const HyperDual<T>& a, double b) { return {a.v * b, a.e1 * b, a.e2 * b, a.e12 * b}; }
template <class T>
HyperDual<T> operator*(double a, const HyperDual<T>& b) { return b * a; }
template <class T>
HyperDual<T> operator/(const HyperDual<T>& a, double b) { return {a.v / b, a.e1 / b, a.e2 / b, a.e12 / b}; }
template <class T>
HyperDual<T> operator/(double a, const HyperDual<T>& b) {
  return HyperDual<T>{constant<T>(a), T{}, T{}, T{}} / b;
}
template <class T>
HyperDual<T>& operator+=(HyperDual<T>& a, const HyperDual<T>& b) { return a = a + b; }
template <class T>
HyperDual<T>& operator-=(HyperDual<T>& a, const HyperDual<T>& b) { return a = a - b; }
template <class T>
HyperDual<T>& operator*=(HyperDual<T>& a, const HyperDual<T>& b) { return a = a * b; }

// f(a) given f, f', f'' at a.v
template <class T>
HyperDual<T> chain(const HyperDual<T>& a, const T& f0, const T& f1, const T& f2) {
  return {f0, f1 * a.e1, f1 * a.e2, f1 * a.e12 + f2 * a.e1 * a.e2};
}

template <class T> HyperDual<T> sin(const HyperDual<T>& a) {
  T s = ad::sin(a.v);
  return chain(a, s, ad::cos(a.v), -s);
}
template <class T> HyperDual<T> cos(const HyperDual<T>& a) {
  T c = ad::cos(a.v);
  return chain(a, c, -ad::sin(a.v), -c);
}
template <class T> HyperDual<T> exp(const HyperDual<T>& a) {
  T e = ad::exp(a.v);
  return chain(a, e, e, e);
}
template <class T> HyperDual<T> log(const HyperDual<T>& a) {
  T inv = 1.0 / a.v;
  return chain(a, ad::log(a.v), inv, -(inv * inv));
}
template <class T> HyperDual<T> sqrt(const HyperDual<T>& a) {
  T s = ad::sqrt(a.v);
  T d1 = 0.5 / s;
  return chain(a, s, d1, -0.5 * d1 / a.v);
}
template <class T> HyperDual<T> sinh(const HyperDual<T>& a) {
  T s = ad::sinh(a.v);
  return chain(a, s, ad::cosh(a.v), s);
}
template <class T> HyperDual<T> cosh(const HyperDual<T>& a) {
  T c = ad::cosh(a.v);
  return chain(a, c, ad::sinh(a.v), c);
}
template <class T> HyperDual<T> abs(const HyperDual<T>& a) { return value_of(a.v) < 0.0 ? -a : a; }
template <class T> HyperDual<T> tan(const HyperDual<T>& a) {
  T t = ad::tan(a.v);
  T sec2 = 1.0 + t * t;
  return chain(a, t, sec2, 2.0 * t * sec2);
}

template <class T>
double value_of(const HyperDual<T>& a) { return value_of(a.v); }

// Integer power by repeated squaring; n may be negative.
template <class T>
T pow_int(const T& x, long n) {
  if (n < 0) return 1.0 / pow_int(x, -n);
  T result = constant<T>(1.0);
  T base = x;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

}  // namespace jetlag::ad
