#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "jetlag/dsl.hpp"
#include "support/random_ast.hpp"

using namespace jetlag;

namespace {

double eval_at(const std::string& src, Dims d, std::vector<double> t, std::vector<double> x, std::vector<double> v) {
  return dsl::eval(dsl::parse(src, d), make_point(d, std::move(t), std::move(x), std::move(v)));
}

}  // namespace

TEST(Parse, FlatKineticTerm) {
  Dims d(1, 2);
  auto e = dsl::parse("v1_1*v1_1 + v2_1*v2_1", d);
  EXPECT_EQ(e.root().op, dsl::Op::Add);
  EXPECT_DOUBLE_EQ(dsl::eval(e, make_point(d, {0.0}, {0.0, 0.0}, {3.0, 4.0})), 25.0);
}

TEST(Parse, RejectsH) {
  EXPECT_THROW(dsl::parse("h(1,1)", Dims(1, 1)), dsl::ParseError);
}

TEST(Parse, SinSquaredTimesVelocity) {
  Dims d(2, 1);
  double r = eval_at("sin(t1)^2 * v1_2", d, {M_PI / 2, 0.0}, {0.0}, {0.0, 3.0});
  EXPECT_NEAR(r, 3.0, 1e-15);
}

TEST(Parse, IndexRangeIsSemantic) {
  try {
    dsl::parse("x3 + 1", Dims(1, 2));
    FAIL();
  } catch (const dsl::ParseError& e) {
    EXPECT_EQ(e.offset(), 0u);
    EXPECT_NE(std::string(e.what()).find("out of range"), std::string::npos);
  }
  EXPECT_THROW(dsl::parse("v1_3", Dims(2, 1)), dsl::ParseError);
  EXPECT_THROW(dsl::parse("t2", Dims(1, 1)), dsl::ParseError);
}

TEST(Parse, DiagnosticsCarryLineAndColumn) {
  try {
    dsl::parse("1 +\n  * 2", Dims(1, 1));
    FAIL();
  } catch (const dsl::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
    EXPECT_FALSE(e.expected().empty());
    EXPECT_EQ(std::string(e.what()).rfind("2:3: ", 0), 0u);
  }
}

TEST(Parse, MiscErrors) {
  Dims d(1, 1);
  for (const char* bad : {"", "   ", "(1", "1)", "sin", "sin 1", "1 2", "2x1", "--1", "1e", "foo(1)", "x1_1", "v1", "@"}) {
    EXPECT_THROW(dsl::parse(bad, d), dsl::ParseError) << bad;
  }
}

TEST(Parse, PowerIsRightAssociative) {
  EXPECT_DOUBLE_EQ(eval_at("2^3^2", Dims(1, 1), {0}, {0}, {0}), 512.0);
  EXPECT_DOUBLE_EQ(eval_at("-2^2", Dims(1, 1), {0}, {0}, {0}), -4.0);
  EXPECT_DOUBLE_EQ(eval_at("2^-1", Dims(1, 1), {0}, {0}, {0}), 0.5);
}

TEST(Eval, Examples) {
  Dims d(1, 1);
  EXPECT_EQ(eval_at("7", d, {1}, {2}, {3}), 7.0);
  EXPECT_EQ(eval_at("v1_1^2", d, {0}, {0}, {-2}), 4.0);
  EXPECT_EQ(eval_at("exp(t1)*x1", d, {0}, {5}, {0}), 5.0);
  EXPECT_NEAR(eval_at("x1^0.5", d, {0}, {2}, {0}), std::sqrt(2.0), 1e-15);
}

TEST(Eval, DomainErrorsCarryOffset) {
  Dims d(1, 1);
  auto e = dsl::parse("1 + log(x1)", d);
  try {
    dsl::eval(e, make_point(d, {0}, {-1}, {0}));
    FAIL();
  } catch (const dsl::EvalError& err) {
    EXPECT_EQ(err.offset(), 4u);
  }
  auto q = dsl::parse("x1 / (t1 - t1)", d);
  EXPECT_THROW(dsl::eval(q, make_point(d, {1}, {1}, {0})), dsl::EvalError);
  auto s = dsl::parse("sqrt(x1)", d);
  EXPECT_THROW(dsl::eval(s, make_point(d, {0}, {-1}, {0})), dsl::EvalError);
}

TEST(Eval, DerivativeAtDomainEdgeIsError) {
  Dims d(1, 1);
  auto e = dsl::parse("sqrt(x1)", d);
  auto pt = make_point(d, {0}, {0}, {0});
  EXPECT_DOUBLE_EQ(dsl::eval(e, pt), 0.0);
  EXPECT_THROW(dsl::eval(e, lift_dual(pt, Coord::space(0))), dsl::EvalError);
}

TEST(Eval, Deterministic) {
  Dims d(2, 2);
  auto e = dsl::parse("sin(t1*x2) + cosh(v2_1)/ (1 + x1^2) - tan(t2)*abs(v1_2)", d);
  auto pt = make_point(d, {0.3, -0.2}, {1.1, 0.4}, {0.5, -0.7, 0.9, 0.1});
  double a = dsl::eval(e, pt);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(dsl::eval(e, pt), a);
}

TEST(Format, Precedence) {
  Dims d(1, 1);
  EXPECT_EQ(dsl::format(dsl::parse("1+2*3", d)), "1 + 2 * 3");
  EXPECT_EQ(dsl::format(dsl::parse("(1+2)*3", d)), "(1 + 2) * 3");
  EXPECT_EQ(dsl::format(dsl::parse("1-(2-3)", d)), "1 - (2 - 3)");
  EXPECT_EQ(dsl::format(dsl::parse("(2^3)^x1", d)), "(2^3)^x1");
  EXPECT_EQ(dsl::format(dsl::parse("-(x1+1)", d)), "-(x1 + 1)");
  EXPECT_EQ(dsl::format(dsl::parse("2^(-x1)", d)), "2^-x1");
}

TEST(Format, RoundTripRandomAsts) {
  std::mt19937_64 rng(2024);
  Dims d(2, 3);
  for (int k = 0; k < 1000; ++k) {
    dsl::Expr a(fixtures::random_node(rng, d, 6));
    std::string s = dsl::format(a);
    dsl::Expr b = dsl::parse(s, d);
    ASSERT_TRUE(dsl::structurally_equal(a, b)) << s << " vs " << dsl::format(b);
  }
}

TEST(Parse, FuzzNeverCrashes) {
  std::mt19937_64 rng(99);
  Dims d(2, 2);
  int parsed = 0;
  for (int k = 0; k < 10000; ++k) {
    std::string s = fixtures::random_bytes(rng);
    try {
      dsl::parse(s, d);
      ++parsed;
    } catch (const dsl::ParseError& e) {
      EXPECT_LE(e.offset(), s.size());
    }
  }
  EXPECT_GT(parsed, 0);
}

TEST(Parse, DeepNestingIsDiagnosed) {
  std::string s(5000, '(');
  s += "1";
  s += std::string(5000, ')');
  EXPECT_THROW(dsl::parse(s, Dims(1, 1)), dsl::ParseError);
}
