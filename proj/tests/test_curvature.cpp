#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "jetlag/curvature.hpp"
#include "support/models.hpp"

using namespace jetlag;
namespace fx = jetlag::fixtures;

namespace {

JetPoint random_point(const Dims& d, std::mt19937_64& rng, double r = 0.6) {
  std::uniform_real_distribution<double> u(-r, r);
  JetPoint pt(d);
  for (auto& c : pt.t) c = u(rng);
  for (auto& c : pt.x) c = u(rng) + 0.8;
  for (auto& c : pt.v) c = u(rng);
  return pt;
}

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  EXPECT_EQ(a.size(), b.size());
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

bool contains(const std::vector<std::string>& v, const std::string& k) { return std::find(v.begin(), v.end(), k) != v.end(); }

}  // namespace

TEST(Tables, FlatInstanceIsZero) {
  Dims d(2, 2);
  Space s(fx::harmonic(d, {{"1", "0"}, {"0", "1"}}, fx::euclidean_time(2)));
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto pack = LinearConnectionPack::cartan(nc);
  std::mt19937_64 rng(3);
  auto pt = random_point(d, rng);
  auto tor = torsion_table(pack, pt);
  auto cur = curvature_table(pack, pt);
  for (const auto& [key, t] : tor.entries()) EXPECT_LT(t.max_abs(), 1e-14) << key;
  for (const auto& [key, t] : cur.entries()) EXPECT_LT(t.max_abs(), 1e-14) << key;
}

TEST(Tables, SphereSpatialCurvature) {
  Space s(fx::sphere_p1());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto pack = LinearConnectionPack::cartan(nc);
  auto pt = make_point(Dims(1, 2), {0.2}, {0.9, 0.4}, {0.3, -0.7});
  auto cur = curvature_table(pack, pt);
  const auto& R = cur.at("R_xx");
  const double s2 = std::sin(0.9) * std::sin(0.9);
  EXPECT_NEAR(R({0, 1, 0, 1}), -s2, 1e-10);
  EXPECT_NEAR(R({0, 1, 1, 0}), s2, 1e-10);
  auto gf = [&s](const auto& q) { return s.g(q); };
  EXPECT_LT(max_diff(R.data(), spatial_curvature(gf, pt)), 1e-10);
}

TEST(Tables, Antisymmetries) {
  Space s(fx::rich_electro_p2());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto pack = LinearConnectionPack::cartan(nc);
  std::mt19937_64 rng(5);
  auto pt = random_point(s.dims(), rng);
  auto tor = torsion_table(pack, pt);
  auto cur = curvature_table(pack, pt, false);
  const std::size_t n = 2, p = 2, np = 4;
  double worst = 0;
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = 0; b < p; ++b)
      for (std::size_t c = 0; c < p; ++c) {
        worst = std::max(worst, std::abs(tor.at("R_tt")({a, b, c}) + tor.at("R_tt")({a, c, b})));
        worst = std::max(worst, std::abs(cur.at("R_tt")({a / p, a % p, b, c}) + cur.at("R_tt")({a / p, a % p, c, b})));
      }
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          worst = std::max(worst, std::abs(cur.at("R_xx")({m, i, j, k}) + cur.at("R_xx")({m, i, k, j})));
          if (k < p) worst = std::max(worst, std::abs(tor.at("R_xx")({m * p + k, i, j}) + tor.at("R_xx")({m * p + k, j, i})));
        }
  const auto& S = cur.at("S_vv");
  for (std::size_t q = 0; q < S.size(); ++q) {
    auto idx = S.unravel(q);
    worst = std::max(worst, std::abs(S.data()[q] + S({idx[0], idx[1], idx[3], idx[2]})));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Tables, ClosedFormsAgreeWithGenericFormulas) {
  for (auto model : {fx::rich_electro_p2(), fx::autonomous_electro_p2()}) {
    Space s(model);
    NonlinearConnection nc(s, NonlinearKind::Canonical);
    auto pack = LinearConnectionPack::cartan(nc);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 3; ++k) {
      auto pt = random_point(s.dims(), rng);
      auto tor = torsion_table(pack, pt);
      auto cf = closed_form_torsion(s, pt);
      EXPECT_LT(max_diff(tor.at("R_tt").data(), cf.R_tt), 1e-7);
      EXPECT_LT(max_diff(tor.at("R_tx").data(), cf.R_tx), 1e-7);
      EXPECT_LT(max_diff(tor.at("R_xx").data(), cf.R_xx), 1e-7);
      EXPECT_GT(max_abs(cf.R_xx), 1e-3);
    }
  }
}

TEST(Tables, ClosedFormRejectsSingleTime) {
  Space s(fx::sphere_p1());
  EXPECT_THROW(closed_form_torsion(s, make_point(Dims(1, 2), {0}, {1, 0}, {0, 0})), DimensionError);
}

TEST(Tables, ExpressionFormMatchesBuiltin) {
  Dims d(2, 2);
  Space a(fx::rich_electro_p2());
  Space b(fx::expression(d, fx::rich_electro_p2_expression(), fx::rich_electro_p2().h()));
  NonlinearConnection na(a, NonlinearKind::Canonical), nb(b, NonlinearKind::Canonical);
  auto pa = LinearConnectionPack::cartan(na), pb = LinearConnectionPack::cartan(nb);
  std::mt19937_64 rng(17);
  auto pt = random_point(d, rng);
  auto ta = torsion_table(pa, pt), tb = torsion_table(pb, pt);
  for (std::size_t k = 0; k < ta.entries().size(); ++k)
    EXPECT_LT(max_diff(ta.entries()[k].second.data(), tb.entries()[k].second.data()), 1e-8) << ta.entries()[k].first;
}

TEST(Tables, LiftStructure) {
  Space s(fx::rich_electro_p2());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto pack = LinearConnectionPack::cartan(nc);
  std::mt19937_64 rng(23);
  auto pt = random_point(s.dims(), rng);
  auto cur = curvature_table(pack, pt);
  const auto& V = cur.at("V_tt");
  const auto& R = cur.at("R_tt");
  const auto& H = cur.at("H");
  const std::size_t n = 2, p = 2;
  double worst = 0;
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t e = 0; e < p; ++e)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < p; ++a)
          for (std::size_t b = 0; b < p; ++b)
            for (std::size_t c = 0; c < p; ++c) {
              double want = (a == e ? R({l, i, b, c}) : 0.0) + (l == i ? H({a, e, b, c}) : 0.0);
              worst = std::max(worst, std::abs(V({l * p + e, i * p + a, b, c}) - want));
            }
  EXPECT_LT(worst, 1e-14);
  EXPECT_GT(H.max_abs(), 1e-3);
  const auto& Vx = cur.at("V_xx");
  EXPECT_DOUBLE_EQ(Vx({0, 1, 0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(Vx({1, 3, 0, 1}), cur.at("R_xx")({0, 1, 0, 1}));
}

TEST(Audit, AutonomyDetection) {
  std::vector<JetPoint> pts;
  std::mt19937_64 rng(1);
  for (int k = 0; k < 3; ++k) pts.push_back(random_point(Dims(2, 2), rng));
  EXPECT_FALSE(autonomous_metric(Space(fx::rich_electro_p2()), pts));
  EXPECT_TRUE(autonomous_metric(Space(fx::autonomous_electro_p2()), pts));
  Dims d(2, 2);
  EXPECT_FALSE(autonomous_metric(Space(fx::expression(d, fx::rich_electro_p2_expression(), fx::rich_electro_p2().h())), pts));
  EXPECT_TRUE(autonomous_metric(Space(fx::expression(d, "(1+x1^2)*(v1_1^2+v1_2^2)+v2_1^2+v2_2^2+x2*v1_1", fx::euclidean_time(2))), pts));
}

TEST(Audit, CartanDeclaredZerosHold) {
  for (auto model : {fx::sphere_p1(), fx::finsler_p1(), fx::rich_electro_p2(), fx::autonomous_electro_p2()}) {
    Space s(model);
    NonlinearConnection nc(s, NonlinearKind::Canonical);
    auto pack = LinearConnectionPack::cartan(nc);
    std::mt19937_64 rng(29);
    std::vector<JetPoint> pts{random_point(s.dims(), rng), random_point(s.dims(), rng)};
    auto audit = table_zero_audit(pack, pts);
    EXPECT_TRUE(audit.passed) << audit.worst << " " << audit.max_abs;
    EXPECT_FALSE(audit.torsion_zero.empty());
  }
}

TEST(Audit, BerwaldDeclaredZerosHoldForAutonomousMetrics) {
  for (auto model : {fx::sphere_p1(), fx::autonomous_electro_p2()}) {
    Space s(model);
    auto pack = LinearConnectionPack::berwald(s);
    std::mt19937_64 rng(31);
    std::vector<JetPoint> pts{random_point(s.dims(), rng), random_point(s.dims(), rng)};
    auto audit = table_zero_audit(pack, pts);
    EXPECT_TRUE(audit.passed) << audit.worst << " " << audit.max_abs;
    EXPECT_TRUE(contains(audit.torsion_zero, "R_tx"));
  }
}

TEST(Audit, SingleTimeMixedTorsionIsNotDeclaredZero) {
  Space s(fx::finsler_p1());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto pack = LinearConnectionPack::cartan(nc);
  std::mt19937_64 rng(37);
  std::vector<JetPoint> pts{random_point(s.dims(), rng)};
  auto audit = table_zero_audit(pack, pts);
  EXPECT_FALSE(contains(audit.torsion_zero, "T_tx"));
  EXPECT_GT(torsion_table(pack, pts[0]).at("T_tx").max_abs(), 1e-3);
  EXPECT_GT(torsion_table(pack, pts[0]).at("P_xv_h").max_abs(), 1e-3);
}

TEST(Audit, NonAutonomousMetricBreaksAutonomousZeros) {
  Space s(fx::rich_electro_p2());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto pack = LinearConnectionPack::cartan(nc);
  std::mt19937_64 rng(41);
  auto pt = random_point(s.dims(), rng);
  EXPECT_GT(torsion_table(pack, pt).at("T_tx").max_abs(), 1e-3);
  EXPECT_GT(curvature_table(pack, pt, false).at("R_tx").max_abs(), 1e-3);
}

TEST(Audit, SingleTimeReduction) {
  // p = 1 with h11 = 1: the temporal Christoffel vanishes and R_tt is zero.
  Space s(fx::sphere_p1());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto pack = LinearConnectionPack::cartan(nc);
  auto pt = make_point(Dims(1, 2), {0.1}, {1.1, 0.3}, {0.5, 0.2});
  auto tor = torsion_table(pack, pt);
  EXPECT_LT(tor.at("R_tt").max_abs(), 1e-14);
  EXPECT_LT(tor.at("S").max_abs(), 1e-14);
  // R_xx torsion is the curvature contracted with the velocity.
  auto cur = curvature_table(pack, pt, false);
  for (std::size_t m = 0; m < 2; ++m)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        double want = 0;
        for (std::size_t k = 0; k < 2; ++k) want += cur.at("R_xx")({m, k, i, j}) * pt.vel(k, 0);
        EXPECT_NEAR(tor.at("R_xx")({m, i, j}), want, 1e-10);
      }
}
