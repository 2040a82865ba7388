#include "jetlag/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace jetlag {

double degeneracy_threshold(const Matrix& m) {
  double mx = 0.0;
  for (double e : m.a) mx = std::max(mx, std::abs(e));
  return 1e-10 * std::pow(mx, static_cast<double>(m.rows));
}

std::vector<double> symmetric_eigenvalues(const Matrix& m) {
  const std::size_t n = m.rows;
  Matrix a = m;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (std::size_t pi = 0; pi < n; ++pi) {
      for (std::size_t q = pi + 1; q < n; ++q) {
        if (std::abs(a(pi, q)) < 1e-300) continue;
        double theta = (a(q, q) - a(pi, pi)) / (2.0 * a(pi, q));
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, pi), akq = a(k, q);
          a(k, pi) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(pi, k), aqk = a(q, k);
          a(pi, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t k = 0; k < n; ++k) ev[k] = a(k, k);
  std::sort(ev.begin(), ev.end());
  return ev;
}

Signature signature_of(const Matrix& m, double rel_tol) {
  auto ev = symmetric_eigenvalues(m);
  double mx = 0.0;
  for (double e : ev) mx = std::max(mx, std::abs(e));
  Signature s;
  for (double e : ev) {
    if (std::abs(e) <= rel_tol * mx || mx == 0.0) {
      ++s.zero;
    } else if (e > 0) {
      ++s.pos;
    } else {
      ++s.neg;
    }
  }
  return s;
}

std::vector<double> least_squares(const Matrix& a, const std::vector<double>& b) {
  Matrix at = transpose(a);
  Matrix ata = at * a;
  std::vector<double> atb(a.cols, 0.0);
  for (std::size_t i = 0; i < a.cols; ++i)
    for (std::size_t r = 0; r < a.rows; ++r) atb[i] += a(r, i) * b[r];
  LU<double> f = lu_factor(ata);
  if (f.singular) throw DegeneracyError("least-squares system is rank deficient", 0.0);
  const std::size_t n = ata.rows;
  std::vector<double> y(n), xs(n);
  for (std::size_t r = 0; r < n; ++r) {
    double s = atb[f.perm[r]];
    for (std::size_t j = 0; j < r; ++j) s -= f.lu(r, j) * y[j];
    y[r] = s;
  }
  for (std::size_t r = n; r-- > 0;) {
    double s = y[r];
    for (std::size_t j = r + 1; j < n; ++j) s -= f.lu(r, j) * xs[j];
    xs[r] = s / f.lu(r, r);
  }
  return xs;
}

}  // namespace jetlag
