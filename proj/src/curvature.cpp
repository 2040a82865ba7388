#include "jetlag/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jetlag {

bool ComponentTable::has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
}

const DTensor& ComponentTable::at(const std::string& key) const {
  for (const auto& e : entries_)
    if (e.first == key) return e.second;
  throw Error("no component family '" + key + "'");
}

namespace {

using Vec = std::vector<double>;

struct Idx {
  std::size_t n, p;
  std::size_t M(std::size_t m, std::size_t mu, std::size_t a) const { return (m * p + mu) * p + a; }
  std::size_t N(std::size_t m, std::size_t mu, std::size_t j) const { return (m * p + mu) * n + j; }
  std::size_t G(std::size_t k, std::size_t j, std::size_t c) const { return (k * n + j) * p + c; }
  std::size_t L(std::size_t i, std::size_t j, std::size_t k) const { return (i * n + j) * n + k; }
  std::size_t C(std::size_t i, std::size_t j, std::size_t k, std::size_t c) const { return ((i * n + j) * n + k) * p + c; }
  std::size_t H(std::size_t c, std::size_t a, std::size_t b) const { return (c * p + a) * p + b; }
  std::size_t H4(std::size_t a, std::size_t e, std::size_t b, std::size_t c) const { return ((a * p + e) * p + b) * p + c; }
  std::size_t v(std::size_t j, std::size_t b) const { return j * p + b; }
};

// Raw torsion families in their table layouts.
struct Torsion {
  Vec R_tt, T_tx, R_tx, T_xx, R_xx, P_tv, P_xv_h, P_xv, S;
};

struct Coefficients {
  Vec M, N, G, L, C, H;
};

Coefficients coefficients(const LinearConnectionPack& pack, const JetPoint& pt) {
  const auto& conn = pack.connection();
  return {conn.M(pt), conn.N(pt), pack.G(pt), pack.L(pt), pack.C(pt), pack.H(pt)};
}

Torsion compute_torsion(const LinearConnectionPack& pack, const JetPoint& pt, const Coefficients& k) {
  const Dims& d = pt.dims;
  const std::size_t n = d.n, p = d.p, np = n * p;
  const Idx I{n, p};
  const auto& conn = pack.connection();
  auto Mf = [&conn](const auto& q) { return conn.M(q); };
  auto Nf = [&conn](const auto& q) { return conn.N(q); };
  std::vector<Vec> dMt(p), dNt(p), dMx(n), dNx(n), vM(np), vN(np);
  for (std::size_t a = 0; a < p; ++a) {
    dMt[a] = conn.derivative(Mf, pt, FrameDirection::temporal(a));
    dNt[a] = conn.derivative(Nf, pt, FrameDirection::temporal(a));
  }
  for (std::size_t j = 0; j < n; ++j) {
    dMx[j] = conn.derivative(Mf, pt, FrameDirection::spatial(j));
    dNx[j] = conn.derivative(Nf, pt, FrameDirection::spatial(j));
    for (std::size_t b = 0; b < p; ++b) {
      vM[I.v(j, b)] = conn.derivative(Mf, pt, FrameDirection::vertical(j, b));
      vN[I.v(j, b)] = conn.derivative(Nf, pt, FrameDirection::vertical(j, b));
    }
  }
  auto dl = [](std::size_t a, std::size_t b) { return a == b ? 1.0 : 0.0; };
  Torsion t;
  t.R_tt.assign(n * p * p * p, 0.0);
  t.T_tx.assign(n * p * n, 0.0);
  t.R_tx.assign(n * p * p * n, 0.0);
  t.T_xx.assign(n * n * n, 0.0);
  t.R_xx.assign(n * p * n * n, 0.0);
  t.P_tv.assign(np * p * np, 0.0);
  t.P_xv_h.assign(n * n * np, 0.0);
  t.P_xv.assign(np * n * np, 0.0);
  t.S.assign(np * np * np, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t j = 0; j < n; ++j) t.T_tx[(m * p + a) * n + j] = -k.G[I.G(m, j, a)];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        t.T_xx[(m * n + i) * n + j] = k.L[I.L(m, i, j)] - k.L[I.L(m, j, i)];
        for (std::size_t b = 0; b < p; ++b) t.P_xv_h[(m * n + i) * np + I.v(j, b)] = k.C[I.C(m, i, j, b)];
      }
    for (std::size_t mu = 0; mu < p; ++mu) {
      const std::size_t row = m * p + mu;
      for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b) t.R_tt[(row * p + a) * p + b] = dMt[b][I.M(m, mu, a)] - dMt[a][I.M(m, mu, b)];
        for (std::size_t j = 0; j < n; ++j) {
          t.R_tx[(row * p + a) * n + j] = dMx[j][I.M(m, mu, a)] - dNt[a][I.N(m, mu, j)];
          for (std::size_t b = 0; b < p; ++b)
            t.P_tv[(row * p + a) * np + I.v(j, b)] =
                vM[I.v(j, b)][I.M(m, mu, a)] - dl(b, mu) * k.G[I.G(m, j, a)] + dl(m, j) * k.H[I.H(b, mu, a)];
        }
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          t.R_xx[(row * n + i) * n + j] = dNx[j][I.N(m, mu, i)] - dNx[i][I.N(m, mu, j)];
          for (std::size_t b = 0; b < p; ++b)
            t.P_xv[(row * n + i) * np + I.v(j, b)] = vN[I.v(j, b)][I.N(m, mu, i)] - dl(b, mu) * k.L[I.L(m, j, i)];
        }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < p; ++a)
          for (std::size_t j = 0; j < n; ++j)
            for (std::size_t b = 0; b < p; ++b)
              t.S[(row * np + I.v(i, a)) * np + I.v(j, b)] =
                  dl(a, mu) * k.C[I.C(m, i, j, b)] - dl(b, mu) * k.C[I.C(m, j, i, a)];
    }
  }
  return t;
}

std::vector<IndexSlot> slots(const Dims& d, const std::string& code) {
  std::vector<IndexSlot> out;
  for (std::size_t k = 0; k + 1 < code.size(); k += 3) {
    std::string s = code.substr(k, 2);
    if (s == "TU") out.push_back(IndexSlot::temporal_upper(d));
    else if (s == "TL") out.push_back(IndexSlot::temporal_lower(d));
    else if (s == "SU") out.push_back(IndexSlot::spatial_upper(d));
    else if (s == "SL") out.push_back(IndexSlot::spatial_lower(d));
    else if (s == "VU") out.push_back(IndexSlot::vertical_upper(d));
    else out.push_back(IndexSlot::vertical_lower(d));
  }
  return out;
}

}  // namespace

ComponentTable torsion_table(const LinearConnectionPack& pack, const JetPoint& pt) {
  const Dims& d = pt.dims;
  auto k = coefficients(pack, pt);
  auto t = compute_torsion(pack, pt, k);
  ComponentTable out;
  out.add("R_tt", DTensor(slots(d, "VU TL TL"), t.R_tt));
  out.add("T_tx", DTensor(slots(d, "SU TL SL"), t.T_tx));
  out.add("R_tx", DTensor(slots(d, "VU TL SL"), t.R_tx));
  out.add("T_xx", DTensor(slots(d, "SU SL SL"), t.T_xx));
  out.add("R_xx", DTensor(slots(d, "VU SL SL"), t.R_xx));
  out.add("P_tv", DTensor(slots(d, "VU TL VL"), t.P_tv));
  out.add("P_xv_h", DTensor(slots(d, "SU SL VL"), t.P_xv_h));
  out.add("P_xv", DTensor(slots(d, "VU SL VL"), t.P_xv));
  out.add("S", DTensor(slots(d, "VU VL VL"), t.S));
  return out;
}

ComponentTable curvature_table(const LinearConnectionPack& pack, const JetPoint& pt, bool with_lifts) {
  const Dims& d = pt.dims;
  const std::size_t n = d.n, p = d.p, np = n * p;
  const Idx I{n, p};
  const auto& conn = pack.connection();
  auto k = coefficients(pack, pt);
  auto tor = compute_torsion(pack, pt, k);
  auto Gf = [&pack](const auto& q) { return pack.G(q); };
  auto Lf = [&pack](const auto& q) { return pack.L(q); };
  auto Cf = [&pack](const auto& q) { return pack.C(q); };

  std::vector<Vec> dGt(p), dLt(p), dGx(n), dLx(n), vG(np), vL(np), vC(np), Ct(p), Cx(n);
  const std::vector<IndexSlot> cval{IndexSlot::spatial_upper(d), IndexSlot::spatial_lower(d), IndexSlot::vertical_lower(d)};
  for (std::size_t a = 0; a < p; ++a) {
    dGt[a] = conn.derivative(Gf, pt, FrameDirection::temporal(a));
    dLt[a] = conn.derivative(Lf, pt, FrameDirection::temporal(a));
    Ct[a] = covariant_derivative(Cf, cval, CovDirection::t_horizontal(a), pack, pt);
  }
  for (std::size_t j = 0; j < n; ++j) {
    dGx[j] = conn.derivative(Gf, pt, FrameDirection::spatial(j));
    dLx[j] = conn.derivative(Lf, pt, FrameDirection::spatial(j));
    Cx[j] = covariant_derivative(Cf, cval, CovDirection::m_horizontal(j), pack, pt);
    for (std::size_t b = 0; b < p; ++b) {
      vG[I.v(j, b)] = conn.derivative(Gf, pt, FrameDirection::vertical(j, b));
      vL[I.v(j, b)] = conn.derivative(Lf, pt, FrameDirection::vertical(j, b));
      vC[I.v(j, b)] = conn.derivative(Cf, pt, FrameDirection::vertical(j, b));
    }
  }
  const Vec& G = k.G;
  const Vec& L = k.L;
  const Vec& C = k.C;
  // sum_{m, mu} C^{l(mu)}_{i(m)} X[(m * p + mu) * stride + rest]
  auto ctrace = [&](std::size_t l, std::size_t i, const Vec& X, std::size_t stride, std::size_t rest) {
    double s = 0.0;
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t mu = 0; mu < p; ++mu) s += C[I.C(l, i, m, mu)] * X[(m * p + mu) * stride + rest];
    return s;
  };

  Vec Hc = h_curvature(pack.space().h(), pt.t);
  Vec Rtt(n * n * p * p), Rtx(n * n * p * n), Rxx(n * n * n * n), Ptv(n * n * p * np), Pxv(n * n * n * np),
      Svv(n * n * np * np);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t li = l * n + i;
      for (std::size_t b = 0; b < p; ++b) {
        for (std::size_t c = 0; c < p; ++c) {
          double s = dGt[c][I.G(l, i, b)] - dGt[b][I.G(l, i, c)];
          for (std::size_t m = 0; m < n; ++m) s += G[I.G(m, i, b)] * G[I.G(l, m, c)] - G[I.G(m, i, c)] * G[I.G(l, m, b)];
          s += ctrace(l, i, tor.R_tt, p * p, b * p + c);
          Rtt[(li * p + b) * p + c] = s;
        }
        for (std::size_t kk = 0; kk < n; ++kk) {
          double s = dGx[kk][I.G(l, i, b)] - dLt[b][I.L(l, i, kk)];
          for (std::size_t m = 0; m < n; ++m) s += G[I.G(m, i, b)] * L[I.L(l, m, kk)] - L[I.L(m, i, kk)] * G[I.G(l, m, b)];
          s += ctrace(l, i, tor.R_tx, p * n, b * n + kk);
          Rtx[(li * p + b) * n + kk] = s;
          for (std::size_t c = 0; c < p; ++c) {
            double q = vG[I.v(kk, c)][I.G(l, i, b)] - Ct[b][I.C(l, i, kk, c)];
            q += ctrace(l, i, tor.P_tv, p * np, b * np + I.v(kk, c));
            Ptv[(li * p + b) * np + I.v(kk, c)] = q;
          }
        }
      }
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t kk = 0; kk < n; ++kk) {
          double s = dLx[kk][I.L(l, i, j)] - dLx[j][I.L(l, i, kk)];
          for (std::size_t m = 0; m < n; ++m) s += L[I.L(m, i, j)] * L[I.L(l, m, kk)] - L[I.L(m, i, kk)] * L[I.L(l, m, j)];
          s += ctrace(l, i, tor.R_xx, n * n, j * n + kk);
          Rxx[(li * n + j) * n + kk] = s;
          for (std::size_t c = 0; c < p; ++c) {
            double q = vL[I.v(kk, c)][I.L(l, i, j)] - Cx[j][I.C(l, i, kk, c)];
            q += ctrace(l, i, tor.P_xv, n * np, j * np + I.v(kk, c));
            Pxv[(li * n + j) * np + I.v(kk, c)] = q;
          }
        }
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t b = 0; b < p; ++b)
          for (std::size_t kk = 0; kk < n; ++kk)
            for (std::size_t c = 0; c < p; ++c) {
              double s = vC[I.v(kk, c)][I.C(l, i, j, b)] - vC[I.v(j, b)][I.C(l, i, kk, c)];
              for (std::size_t m = 0; m < n; ++m)
                s += C[I.C(m, i, j, b)] * C[I.C(l, m, kk, c)] - C[I.C(m, i, kk, c)] * C[I.C(l, m, j, b)];
              Svv[(li * np + I.v(j, b)) * np + I.v(kk, c)] = s;
            }
    }

  ComponentTable out;
  out.add("H", DTensor(slots(d, "TU TL TL TL"), Hc));
  out.add("R_tt", DTensor(slots(d, "SU SL TL TL"), Rtt));
  out.add("R_tx", DTensor(slots(d, "SU SL TL SL"), Rtx));
  out.add("R_xx", DTensor(slots(d, "SU SL SL SL"), Rxx));
  out.add("P_tv", DTensor(slots(d, "SU SL TL VL"), Ptv));
  out.add("P_xv", DTensor(slots(d, "SU SL SL VL"), Pxv));
  out.add("S_vv", DTensor(slots(d, "SU SL VL VL"), Svv));
  if (!with_lifts) return out;

  // delta-lifted families: X^{(l)(a)}_{(e)(i)...} = delta^a_e X^l_{i...}
  // (+ delta^l_i H^a_{e..} for the tt family).
  auto lift = [&](const Vec& base, std::size_t rest, bool with_h) {
    Vec outv(np * np * rest, 0.0);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t e = 0; e < p; ++e)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t a = 0; a < p; ++a)
            for (std::size_t r = 0; r < rest; ++r) {
              double v = a == e ? base[(l * n + i) * rest + r] : 0.0;
              if (with_h && l == i) v += Hc[(a * p + e) * p * p + r];
              outv[((l * p + e) * np + i * p + a) * rest + r] = v;
            }
    return outv;
  };
  out.add("V_tt", DTensor(slots(d, "VU VL TL TL"), lift(Rtt, p * p, true)));
  out.add("V_tx", DTensor(slots(d, "VU VL TL SL"), lift(Rtx, p * n, false)));
  out.add("V_xx", DTensor(slots(d, "VU VL SL SL"), lift(Rxx, n * n, false)));
  out.add("V_tv", DTensor(slots(d, "VU VL TL VL"), lift(Ptv, p * np, false)));
  out.add("V_xv", DTensor(slots(d, "VU VL SL VL"), lift(Pxv, n * np, false)));
  out.add("V_vv", DTensor(slots(d, "VU VL VL VL"), lift(Svv, np * np, false)));
  return out;
}

namespace {

// F^m_{i(mu)} = (g^{mq}/2)(d_mu g_qi + 1/2 h_{mu b} U^{(b)}_{(q)i}), layout (m * n + i) * p + mu.
template <class T>
std::vector<T> f_tensor(const Space& s, const JetPointT<T>& q) {
  const Dims& d = s.dims();
  const std::size_t n = d.n, p = d.p;
  auto gf = [&s](const auto& r) { return s.g(r); };
  Mat<T> gu = inverse(s.g(q));
  Mat<T> hl = s.h().lower(q.t);
  auto curl = s.U_curl(q);
  std::vector<Mat<T>> dg;
  for (std::size_t mu = 0; mu < p; ++mu) dg.push_back(directional(gf, q, time_direction<T>(d, mu)));
  std::vector<T> out(n * n * p, ad::constant<T>(0.0));
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t mu = 0; mu < p; ++mu) {
        T s2 = ad::constant<T>(0.0);
        for (std::size_t r = 0; r < n; ++r) {
          T inner = dg[mu](r, i);
          for (std::size_t b = 0; b < p; ++b) inner = inner + 0.5 * hl(mu, b) * curl[(r * n + i) * p + b];
          s2 = s2 + gu(m, r) * inner;
        }
        out[(m * n + i) * p + mu] = 0.5 * s2;
      }
  return out;
}

}  // namespace

ClosedFormTorsion closed_form_torsion(const Space& space, const JetPoint& pt) {
  const Dims& d = pt.dims;
  const std::size_t n = d.n, p = d.p;
  if (p < 2) throw DimensionError("closed-form torsion needs p >= 2");
  const Idx I{n, p};
  auto H = h_christoffel(space.h(), pt.t);
  auto Hc = h_curvature(space.h(), pt.t);
  auto gf = [&space](const auto& q) { return space.g(q); };
  auto Gam = spatial_christoffel(gf, pt);
  auto r = spatial_curvature(gf, pt);
  auto Fv = f_tensor(space, pt);
  auto Ff = [&space](const auto& q) { return f_tensor(space, q); };
  auto Nf = [&space](const auto& q) { return space.canonical_N(q); };
  std::vector<Vec> dF(n), dN(p);
  for (std::size_t j = 0; j < n; ++j) dF[j] = directional(Ff, pt, space_direction<double>(d, j));
  for (std::size_t a = 0; a < p; ++a) dN[a] = directional(Nf, pt, time_direction<double>(d, a));
  auto F = [&](std::size_t m, std::size_t i, std::size_t mu) { return Fv[(m * n + i) * p + mu]; };
  // F^m_{i(mu)|j}
  auto Fbar = [&](std::size_t m, std::size_t i, std::size_t mu, std::size_t j) {
    double s = dF[j][(m * n + i) * p + mu];
    for (std::size_t l = 0; l < n; ++l) s += Gam[(m * n + l) * n + j] * F(l, i, mu) - Gam[(l * n + i) * n + j] * F(m, l, mu);
    return s;
  };
  ClosedFormTorsion out;
  out.R_tt.assign(n * p * p * p, 0.0);
  out.R_tx.assign(n * p * p * n, 0.0);
  out.R_xx.assign(n * p * n * n, 0.0);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t mu = 0; mu < p; ++mu) {
      const std::size_t row = m * p + mu;
      for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b) {
          double s = 0.0;
          for (std::size_t c = 0; c < p; ++c) s -= Hc[I.H4(c, mu, a, b)] * pt.vel(m, c);
          out.R_tt[(row * p + a) * p + b] = s;
        }
        for (std::size_t j = 0; j < n; ++j) {
          double s = -dN[a][I.N(m, mu, j)];
          for (std::size_t b = 0; b < p; ++b) s += H[I.H(b, mu, a)] * F(m, j, b);
          out.R_tx[(row * p + a) * n + j] = s;
        }
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double s = Fbar(m, i, mu, j) - Fbar(m, j, mu, i);
          for (std::size_t kk = 0; kk < n; ++kk) s += r[((m * n + kk) * n + i) * n + j] * pt.vel(kk, mu);
          out.R_xx[(row * n + i) * n + j] = s;
        }
    }
  return out;
}

bool autonomous_metric(const Space& space, const std::vector<JetPoint>& points) {
  const auto& model = space.model();
  if (model.builtin()) return !model.declared_g_uses(dsl::Op::VarT) && !model.declared_g_uses(dsl::Op::VarV);
  const Dims& d = space.dims();
  auto gf = [&space](const auto& q) { return space.g(q); };
  for (const auto& pt : points) {
    Matrix g = space.g(pt);
    double scale = 1.0;
    for (double x : g.a) scale = std::max(scale, std::abs(x));
    auto check = [&](const std::vector<double>& dir) {
      Matrix dg = directional(gf, pt, dir);
      for (double x : dg.a)
        if (std::abs(x) > 1e-12 * scale) return false;
      return true;
    };
    for (std::size_t a = 0; a < d.p; ++a)
      if (!check(time_direction<double>(d, a))) return false;
    for (std::size_t i = 0; i < d.n; ++i)
      for (std::size_t a = 0; a < d.p; ++a)
        if (!check(velocity_direction<double>(d, i, a))) return false;
  }
  return true;
}

void declared_zero_families(const LinearConnectionPack& pack, bool autonomous, std::vector<std::string>& torsion,
                            std::vector<std::string>& curvature) {
  const std::size_t p = pack.space().dims().p;
  torsion.clear();
  curvature.clear();
  if (pack.kind() == PackKind::Cartan) {
    if (p == 1) {
      torsion = {"R_tt", "T_xx", "S"};
      curvature = {"H"};
    } else {
      torsion = {"T_xx", "P_xv_h", "P_xv", "S"};
      curvature = {"P_tv", "P_xv", "S_vv", "V_tv", "V_xv", "V_vv"};
    }
    if (autonomous) {
      torsion.insert(torsion.end(), {"T_tx", "P_tv"});
      curvature.insert(curvature.end(), {"R_tt", "R_tx", "V_tx"});
    }
  } else {
    torsion = {"T_tx", "T_xx", "P_tv", "P_xv_h", "P_xv", "S"};
    curvature = {"R_tt", "P_tv", "P_xv", "S_vv", "V_tv", "V_xv", "V_vv"};
    if (p == 1) {
      torsion.push_back("R_tt");
      curvature.push_back("H");
    }
    if (autonomous) {
      torsion.push_back("R_tx");
      curvature.insert(curvature.end(), {"R_tx", "V_tx"});
    }
  }
  // The tt lift carries H, so it vanishes only with both of its parts.
  auto has = [&](const char* k) { return std::find(curvature.begin(), curvature.end(), k) != curvature.end(); };
  if (has("H") && has("R_tt")) curvature.push_back("V_tt");
}

ZeroAudit table_zero_audit(const LinearConnectionPack& pack, const std::vector<JetPoint>& points, double tol) {
  ZeroAudit audit;
  declared_zero_families(pack, autonomous_metric(pack.space(), points), audit.torsion_zero, audit.curvature_zero);
  auto scan = [&](const ComponentTable& table, const std::vector<std::string>& keys, const char* prefix) {
    for (const auto& key : keys) {
      const DTensor& t = table.at(key);
      for (std::size_t q = 0; q < t.size(); ++q) {
        double v = std::abs(t.data()[q]);
        if (v > audit.max_abs || audit.worst.empty()) {
          audit.max_abs = std::max(audit.max_abs, v);
          std::ostringstream name;
          name << prefix << "." << key << "[";
          auto idx = t.unravel(q);
          for (std::size_t s = 0; s < idx.size(); ++s) name << (s ? "," : "") << idx[s];
          name << "]";
          audit.worst = name.str();
        }
      }
    }
  };
  for (const auto& pt : points) {
    scan(torsion_table(pack, pt), audit.torsion_zero, "torsion");
    scan(curvature_table(pack, pt), audit.curvature_zero, "curvature");
  }
  audit.passed = audit.max_abs <= tol;
  return audit;
}

}  // namespace jetlag
