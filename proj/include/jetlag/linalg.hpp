#pragma once

// Small dense matrices over any scalar type. Dimensions here never exceed
// a handful, so everything is plain loops.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "jetlag/autodiff.hpp"
#include "jetlag/jet.hpp"

namespace jetlag {

class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, double det) : Error(what), det_(det) {}
  double determinant() const { return det_; }

 private:
  double det_;
};

template <class T>
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, ad::constant<T>(0.0)) {}

  T& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = ad::constant<T>(1.0);
    return m;
  }
};

using Matrix = Mat<double>;

template <class T>
Mat<T> operator*(const Mat<T>& x, const Mat<T>& y) {
  Mat<T> r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k)
      for (std::size_t j = 0; j < y.cols; ++j) r(i, j) = r(i, j) + x(i, k) * y(k, j);
  return r;
}

template <class T>
Mat<T> transpose(const Mat<T>& m) {
  Mat<T> r(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) r(j, i) = m(i, j);
  return r;
}

inline Matrix values_of(const Matrix& m) { return m; }

template <class T>
Matrix values_of(const Mat<T>& m) {
  Matrix r(m.rows, m.cols);
  for (std::size_t k = 0; k < m.a.size(); ++k) r.a[k] = ad::value_of(m.a[k]);
  return r;
}

/// Degeneracy threshold for a square matrix: 1e-10 * (max |entry|)^dim.
double degeneracy_threshold(const Matrix& m);

/// LU factorization with partial pivoting (pivots chosen on value parts).
template <class T>
struct LU {
  Mat<T> lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;
};

template <class T>
LU<T> lu_factor(const Mat<T>& m) {
  LU<T> f{m, {}, 1, false};
  const std::size_t n = m.rows;
  f.perm.resize(n);
  for (std::size_t k = 0; k < n; ++k) f.perm[k] = k;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    double best = std::abs(ad::value_of(f.lu(c, c)));
    for (std::size_t r = c + 1; r < n; ++r) {
      double cand = std::abs(ad::value_of(f.lu(r, c)));
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (best == 0.0) {
      f.singular = true;
      return f;
    }
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(c, j), f.lu(piv, j));
      std::swap(f.perm[c], f.perm[piv]);
      f.sign = -f.sign;
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      T factor = f.lu(r, c) / f.lu(c, c);
      f.lu(r, c) = factor;
      for (std::size_t j = c + 1; j < n; ++j) f.lu(r, j) = f.lu(r, j) - factor * f.lu(c, j);
    }
  }
  return f;
}

template <class T>
T lu_determinant(const LU<T>& f) {
  if (f.singular) return ad::constant<T>(0.0);
  T d = ad::constant<T>(static_cast<double>(f.sign));
  for (std::size_t k = 0; k < f.lu.rows; ++k) d = d * f.lu(k, k);
  return d;
}

template <class T>
T determinant(const Mat<T>& m) {
  return lu_determinant(lu_factor(m));
}

/// Inverse by partial-pivot LU. Works over derivative scalars, where the
/// arithmetic carries d(A^-1) = -A^-1 dA A^-1 automatically. Throws
/// DegeneracyError when |det| is below degeneracy_threshold.
template <class T>
Mat<T> inverse(const Mat<T>& m) {
  const std::size_t n = m.rows;
  LU<T> f = lu_factor(m);
  double det = f.singular ? 0.0 : ad::value_of(lu_determinant(f));
  if (f.singular || !(std::abs(det) > degeneracy_threshold(values_of(m)))) {
    throw DegeneracyError("matrix is degenerate (det = " + std::to_string(det) + ")", det);
  }
  Mat<T> inv(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    std::vector<T> y(n, ad::constant<T>(0.0));
    for (std::size_t r = 0; r < n; ++r) {
      T s = ad::constant<T>(f.perm[r] == col ? 1.0 : 0.0);
      for (std::size_t j = 0; j < r; ++j) s = s - f.lu(r, j) * y[j];
      y[r] = s;
    }
    for (std::size_t r = n; r-- > 0;) {
      T s = y[r];
      for (std::size_t j = r + 1; j < n; ++j) s = s - f.lu(r, j) * inv(j, col);
      inv(r, col) = s / f.lu(r, r);
    }
  }
  return inv;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
std::vector<double> symmetric_eigenvalues(const Matrix& m);

struct Signature {
  int pos = 0;
  int neg = 0;
  int zero = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Eigenvalue sign counts; |lambda| <= rel_tol * max|lambda| counts as zero.
Signature signature_of(const Matrix& m, double rel_tol = 1e-12);

/// Least-squares solve of A x = b through the normal equations.
std::vector<double> least_squares(const Matrix& a, const std::vector<double>& b);

}  // namespace jetlag
