#include <cmath>

#include <gtest/gtest.h>

#include "jetlag/autodiff.hpp"
#include "jetlag/linalg.hpp"

using namespace jetlag;
using ad::Dual;
using ad::HyperDual;

TEST(Dual, ProductAndQuotient) {
  Dual<double> x{3.0, 1.0};
  auto y = x * x / (x + 1.0);
  // d/dx x^2/(x+1) = (x^2 + 2x)/(x+1)^2
  EXPECT_DOUBLE_EQ(y.v, 9.0 / 4.0);
  EXPECT_NEAR(y.d, 15.0 / 16.0, 1e-15);
}

TEST(Dual, Transcendentals) {
  Dual<double> x{0.7, 1.0};
  EXPECT_NEAR(ad::sin(x).d, std::cos(0.7), 1e-15);
  EXPECT_NEAR(ad::exp(x).d, std::exp(0.7), 1e-15);
  EXPECT_NEAR(ad::log(x).d, 1.0 / 0.7, 1e-15);
  EXPECT_NEAR(ad::sqrt(x).d, 0.5 / std::sqrt(0.7), 1e-15);
  EXPECT_NEAR(ad::tan(x).d, 1.0 / (std::cos(0.7) * std::cos(0.7)), 1e-14);
  EXPECT_NEAR(ad::sinh(x).d, std::cosh(0.7), 1e-15);
  EXPECT_NEAR(ad::cosh(x).d, std::sinh(0.7), 1e-15);
  EXPECT_DOUBLE_EQ(ad::abs(Dual<double>{-2.0, 1.0}).d, -1.0);
}

TEST(HyperDual, MixedSecondDerivative) {
  // f(a, b) = sin(a * b); f_ab = cos(ab) - ab sin(ab)
  HyperDual<double> a{0.3, 1.0, 0.0, 0.0};
  HyperDual<double> b{1.1, 0.0, 1.0, 0.0};
  auto f = ad::sin(a * b);
  double ab = 0.33;
  EXPECT_NEAR(f.e12, std::cos(ab) - ab * std::sin(ab), 1e-15);
  EXPECT_NEAR(f.e1, 1.1 * std::cos(ab), 1e-15);
  EXPECT_NEAR(f.e2, 0.3 * std::cos(ab), 1e-15);
}

TEST(Nesting, ThirdDerivativeThroughDualOfHyperDual) {
  // f(x) = x^5, f''' = 60 x^2
  using S = HyperDual<Dual<double>>;
  S x{};
  x.v = {2.0, 1.0};
  x.e1 = {1.0, 0.0};
  x.e2 = {1.0, 0.0};
  auto f = ad::pow_int(x, 5);
  EXPECT_NEAR(f.e12.v, 20.0 * 8.0, 1e-12);
  EXPECT_NEAR(f.e12.d, 60.0 * 4.0, 1e-12);
}

TEST(PowInt, NegativeExponent) {
  Dual<double> x{2.0, 1.0};
  auto y = ad::pow_int(x, -2);
  EXPECT_DOUBLE_EQ(y.v, 0.25);
  EXPECT_DOUBLE_EQ(y.d, -0.25);
}

TEST(Inverse, DerivativeMatchesMinusAinvDaAinv) {
  Mat<Dual<double>> a(2, 2);
  a(0, 0) = {2.0, 1.0};
  a(0, 1) = {1.0, 0.0};
  a(1, 0) = {1.0, 0.0};
  a(1, 1) = {3.0, 2.0};
  auto inv = inverse(a);
  Matrix A(2, 2), dA(2, 2);
  for (std::size_t k = 0; k < 4; ++k) {
    A.a[k] = a.a[k].v;
    dA.a[k] = a.a[k].d;
  }
  Matrix Ai = inverse(A);
  Matrix expect = Ai * dA * Ai;
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(inv.a[k].d, -expect.a[k], 1e-14);
}
