#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "jetlag/cartan.hpp"
#include "support/models.hpp"

using namespace jetlag;
namespace fx = jetlag::fixtures;

namespace {

JetPoint random_point(const Dims& d, std::mt19937_64& rng, double r = 0.6) {
  std::uniform_real_distribution<double> u(-r, r);
  JetPoint pt(d);
  for (auto& c : pt.t) c = u(rng);
  for (auto& c : pt.x) c = u(rng);
  for (auto& c : pt.v) c = u(rng);
  return pt;
}

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST(Pack, FlatInstanceHasZeroCoefficients) {
  Dims d(2, 2);
  Space s(fx::harmonic(d, {{"1", "0"}, {"0", "1"}}, fx::euclidean_time(2)));
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto pack = LinearConnectionPack::cartan(nc);
  std::mt19937_64 rng(1);
  auto pt = random_point(d, rng);
  EXPECT_EQ(max_abs(pack.H(pt)), 0.0);
  EXPECT_EQ(max_abs(pack.G(pt)), 0.0);
  EXPECT_EQ(max_abs(pack.L(pt)), 0.0);
  EXPECT_EQ(max_abs(pack.C(pt)), 0.0);
}

TEST(Pack, SphereCartanIsLeviCivita) {
  Space s(fx::sphere_p1());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto cartan = LinearConnectionPack::cartan(nc);
  auto berwald = LinearConnectionPack::berwald(s);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    auto pt = random_point(s.dims(), rng);
    pt.x[0] = 0.6 + std::abs(pt.x[0]);
    auto gf = [&](const auto& q) { return s.g(q); };
    auto Gam = spatial_christoffel(gf, pt);
    EXPECT_LE(max_diff(cartan.L(pt), Gam), 1e-10);
    EXPECT_LE(max_diff(berwald.L(pt), Gam), 1e-12);
    EXPECT_LE(max_abs(cartan.C(pt)), 1e-12);
    EXPECT_LE(max_abs(cartan.G(pt)), 1e-12);
  }
}

TEST(Pack, AutonomousElectrodynamicsMatchesBerwald) {
  Space s(fx::autonomous_electro_p2());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto cartan = LinearConnectionPack::cartan(nc);
  auto berwald = LinearConnectionPack::berwald(s);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    auto pt = random_point(s.dims(), rng);
    EXPECT_LE(max_diff(cartan.H(pt), berwald.H(pt)), 1e-14);
    EXPECT_LE(max_abs(cartan.G(pt)), 1e-12);
    EXPECT_LE(max_diff(cartan.L(pt), berwald.L(pt)), 1e-10);
    EXPECT_LE(max_abs(cartan.C(pt)), 1e-12);
  }
}

TEST(Pack, TwoTimeGeneralCase) {
  // p >= 2: C = 0, L = Gamma, G^k_{jc} = (g^{ki}/2) d_c g_ij.
  Space s(fx::rich_electro_p2());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto cartan = LinearConnectionPack::cartan(nc);
  auto berwald = LinearConnectionPack::berwald(s);
  std::mt19937_64 rng(4);
  const std::size_t n = 2, p = 2;
  auto pt = random_point(s.dims(), rng);
  auto gf = [&](const auto& q) { return s.g(q); };
  EXPECT_LE(max_diff(cartan.L(pt), spatial_christoffel(gf, pt)), 1e-10);
  EXPECT_LE(max_abs(cartan.C(pt)), 1e-12);
  Matrix gu = invert_metric(s.g(pt));
  auto G = cartan.G(pt);
  for (std::size_t c = 0; c < p; ++c) {
    Matrix dg = directional(gf, pt, time_direction<double>(s.dims(), c));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) {
        double want = 0;
        for (std::size_t i = 0; i < n; ++i) want += 0.5 * gu(k, i) * dg(i, j);
        EXPECT_NEAR(G[(k * n + j) * p + c], want, 1e-12);
      }
  }
  // Cartan and Berwald differ for non-autonomous g.
  EXPECT_GT(max_abs(G), 1e-3);
  EXPECT_EQ(max_abs(berwald.G(pt)), 0.0);
}

TEST(Pack, CoefficientSymmetries) {
  Space s(fx::finsler_p1());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto pack = LinearConnectionPack::cartan(nc);
  std::mt19937_64 rng(5);
  const std::size_t n = 2, p = 1;
  auto pt = random_point(s.dims(), rng);
  auto L = pack.L(pt);
  auto C = pack.C(pt);
  EXPECT_GT(max_abs(C), 1e-4);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        EXPECT_NEAR(L[(i * n + j) * n + k], L[(i * n + k) * n + j], 1e-9);
        for (std::size_t c = 0; c < p; ++c)
          EXPECT_NEAR(C[((i * n + j) * n + k) * p + c], C[((i * n + k) * n + j) * p + c], 1e-9);
      }
}

TEST(Compatibility, CartanIsMetricOnEveryInstance) {
  std::vector<LagrangianModel> models{fx::sphere_p1(), fx::finsler_p1(), fx::rich_electro_p2(), fx::autonomous_electro_p2()};
  std::mt19937_64 rng(6);
  for (const auto& m : models) {
    Space s(m);
    NonlinearConnection nc(s, NonlinearKind::Canonical);
    auto pack = LinearConnectionPack::cartan(nc);
    for (int trial = 0; trial < 4; ++trial) {
      auto pt = random_point(s.dims(), rng);
      if (s.dims().p == 1 && s.dims().n == 2) pt.x[0] = 0.6 + std::abs(pt.x[0]);
      auto r = metric_compatibility(pack, pt);
      EXPECT_LE(r.max(), 1e-7) << "g_t " << r.g_t << " g_m " << r.g_m << " g_v " << r.g_v << " h_t " << r.h_t;
    }
  }
}

TEST(Compatibility, BerwaldFailsOnNonAutonomousG) {
  Space s(fx::rich_electro_p2());
  auto pack = LinearConnectionPack::berwald(s);
  std::mt19937_64 rng(7);
  auto r = metric_compatibility(pack, random_point(s.dims(), rng));
  EXPECT_GT(r.g_t, 1e-3);
  EXPECT_LE(r.g_m, 1e-9);
}

TEST(Covariant, NormalizationTensorIsParallel) {
  // J^{(i)}_{(a)bj} = h_{ab} delta^i_j has vanishing derivative in all directions.
  std::vector<LagrangianModel> models{fx::finsler_p1(), fx::rich_electro_p2()};
  std::mt19937_64 rng(8);
  for (const auto& m : models) {
    Space s(m);
    const Dims& d = s.dims();
    NonlinearConnection nc(s, NonlinearKind::Canonical);
    auto pack = LinearConnectionPack::cartan(nc);
    auto pt = random_point(d, rng);
    auto J = [&s, d](const auto& q) {
      using T = std::decay_t<decltype(q.t[0])>;
      auto hl = s.h().lower(q.t);
      const std::size_t n = d.n, p = d.p;
      std::vector<T> out(n * p * p * n, ad::constant<T>(0.0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < p; ++a)
          for (std::size_t b = 0; b < p; ++b) out[(((i * p + a) * p + b) * n) + i] = hl(a, b);
      return out;
    };
    std::vector<IndexSlot> val{IndexSlot::vertical_upper(d), IndexSlot::temporal_lower(d), IndexSlot::spatial_lower(d)};
    for (std::size_t c = 0; c < d.p; ++c)
      EXPECT_LE(max_abs(covariant_derivative(J, val, CovDirection::t_horizontal(c), pack, pt)), 1e-9);
    for (std::size_t k = 0; k < d.n; ++k) {
      EXPECT_LE(max_abs(covariant_derivative(J, val, CovDirection::m_horizontal(k), pack, pt)), 1e-9);
      for (std::size_t c = 0; c < d.p; ++c)
        EXPECT_LE(max_abs(covariant_derivative(J, val, CovDirection::vertical(k, c), pack, pt)), 1e-9);
    }
  }
}

TEST(Covariant, ScalarIsAdaptedDerivative) {
  Space s(fx::finsler_p1());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto pack = LinearConnectionPack::cartan(nc);
  std::mt19937_64 rng(9);
  auto pt = random_point(s.dims(), rng);
  auto Lf = [&s](const auto& q) { return std::vector<std::decay_t<decltype(q.t[0])>>{s.L(q)}; };
  auto cov = covariant_derivative(Lf, {}, CovDirection::m_horizontal(1), pack, pt);
  auto adapted = nc.derivative(Lf, pt, FrameDirection::spatial(1));
  EXPECT_DOUBLE_EQ(cov[0], adapted[0]);
}

TEST(Covariant, VelocityFieldAlongTemporalDirection) {
  // delta(x^j_b)/delta t^a = -M^{(j)}_{(b)a}.
  Space s(fx::rich_electro_p2());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  std::mt19937_64 rng(10);
  auto pt = random_point(s.dims(), rng);
  const Dims& d = s.dims();
  auto vf = [](const auto& q) { return q.v; };
  auto M = nc.M(pt);
  for (std::size_t a = 0; a < d.p; ++a) {
    auto dv = nc.derivative(vf, pt, FrameDirection::temporal(a));
    for (std::size_t j = 0; j < d.n; ++j)
      for (std::size_t b = 0; b < d.p; ++b) EXPECT_DOUBLE_EQ(dv[d.vidx(j, b)], -M[(j * d.p + b) * d.p + a]);
  }
}

TEST(Probe, CartanMatchesAndPerturbationIsDetected) {
  Space s(fx::sphere_p1());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto pack = LinearConnectionPack::cartan(nc);
  std::vector<JetPoint> pts{make_point(s.dims(), {0.1}, {0.9, 0.2}, {0.3, -0.4}),
                            make_point(s.dims(), {0.5}, {1.2, -0.7}, {-0.2, 0.8})};
  auto ok = uniqueness_probe(pack, pts);
  EXPECT_LE(ok.max(), 1e-10);
  pack.perturb(CoefficientFamily::L, 0, 1e-3);
  auto bad = uniqueness_probe(pack, pts);
  EXPECT_NEAR(bad.L.mismatch, 1e-3, 1e-9);
  EXPECT_EQ(bad.L.worst_index, (std::vector<std::size_t>{0, 0, 0}));
}

TEST(Probe, BerwaldMismatchesInGBlockForNonAutonomousG) {
  Space s(fx::rich_electro_p2());
  auto pack = LinearConnectionPack::berwald(s);
  std::mt19937_64 rng(11);
  auto rep = uniqueness_probe(pack, {random_point(s.dims(), rng)});
  EXPECT_GT(rep.G.mismatch, 1e-3);
  EXPECT_LE(rep.L.mismatch, 1e-9);
}

TEST(Probe, FiniteDifferenceOracleForSingleTimeCartan) {
  // Classical Cartan connection of a Lagrange space: Christoffel process on
  // delta_k g = d_k g - N^j_k d_{y^j} g with partials by central differences.
  Space s(fx::finsler_p1());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto pack = LinearConnectionPack::cartan(nc);
  const Dims& d = s.dims();
  const std::size_t n = 2;
  auto pt = make_point(d, {0.2}, {0.4, -0.3}, {0.5, 0.25});
  auto N = nc.N(pt);
  const double h = 1e-5;
  auto fd = [&](auto shift) {
    JetPoint a = pt, b = pt;
    shift(a, h);
    shift(b, -h);
    Matrix ga = s.g(a), gb = s.g(b), out(n, n);
    for (std::size_t q = 0; q < n * n; ++q) out.a[q] = (ga.a[q] - gb.a[q]) / (2 * h);
    return out;
  };
  std::vector<Matrix> dx, dy, delta;
  for (std::size_t k = 0; k < n; ++k) {
    dx.push_back(fd([k](JetPoint& q, double e) { q.x[k] += e; }));
    dy.push_back(fd([k](JetPoint& q, double e) { q.v[k] += e; }));
  }
  for (std::size_t k = 0; k < n; ++k) {
    Matrix m = dx[k];
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t q = 0; q < n * n; ++q) m.a[q] -= N[j * n + k] * dy[j].a[q];
    delta.push_back(m);
  }
  Matrix g = s.g(pt);
  auto Lw = christoffel_from_derivatives(g, delta);
  auto Cw = christoffel_from_derivatives(g, dy);
  EXPECT_LE(max_diff(pack.L(pt), Lw), 1e-7);
  EXPECT_LE(max_diff(pack.C(pt), Cw), 1e-7);
}

TEST(Tensors, PackTensorValences) {
  Space s(fx::rich_electro_p2());
  NonlinearConnection nc(s, NonlinearKind::Canonical);
  auto pack = LinearConnectionPack::cartan(nc);
  auto pt = make_point(s.dims(), {0.1, 0.2}, {0.3, 0.4}, {0.1, 0.2, 0.3, 0.4});
  DTensor C = pack_tensor(pack, CoefficientFamily::C, pt);
  EXPECT_EQ(C.rank(), 3u);
  EXPECT_EQ(C.slots()[2].kind, SlotKind::VerticalLower);
  DTensor L = pack_tensor(pack, CoefficientFamily::L, pt);
  EXPECT_DOUBLE_EQ(L({1, 0, 1}), pack.L(pt)[(1 * 2 + 0) * 2 + 1]);
}
