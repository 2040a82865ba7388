#include "jetlag/cartan.hpp"

#include <algorithm>
#include <cmath>

#include "jetlag/linalg.hpp"

namespace jetlag {

std::string to_string(PackKind k) { return k == PackKind::Cartan ? "cartan" : "berwald"; }

std::string to_string(CoefficientFamily f) {
  switch (f) {
    case CoefficientFamily::H: return "H";
    case CoefficientFamily::G: return "G";
    case CoefficientFamily::L: return "L";
    case CoefficientFamily::C: return "C";
  }
  return "?";
}

LinearConnectionPack LinearConnectionPack::cartan(const NonlinearConnection& conn) {
  return LinearConnectionPack(PackKind::Cartan, conn);
}

LinearConnectionPack LinearConnectionPack::berwald(const Space& space) {
  return LinearConnectionPack(PackKind::Berwald, NonlinearConnection(space, NonlinearKind::MetricPair));
}

void LinearConnectionPack::perturb(CoefficientFamily family, std::size_t flat_index, double delta) {
  perturbations_.push_back({family, flat_index, delta});
}

FrameDirection CovDirection::frame() const {
  switch (kind) {
    case Kind::THorizontal: return FrameDirection::temporal(c);
    case Kind::MHorizontal: return FrameDirection::spatial(k);
    case Kind::Vertical: return FrameDirection::vertical(k, c);
  }
  return FrameDirection::spatial(k);
}

DirectionCoefficients direction_coefficients(const LinearConnectionPack& pack, const JetPoint& pt, const CovDirection& dir) {
  const Dims& d = pt.dims;
  const std::size_t n = d.n, p = d.p;
  DirectionCoefficients out{Matrix(n, n), Matrix(p, p)};
  switch (dir.kind) {
    case CovDirection::Kind::THorizontal: {
      auto G = pack.G(pt);
      auto H = pack.H(pt);
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = 0; m < n; ++m) out.spatial(l, m) = G[(l * n + m) * p + dir.c];
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) out.temporal(a, b) = H[(a * p + b) * p + dir.c];
      break;
    }
    case CovDirection::Kind::MHorizontal: {
      auto L = pack.L(pt);
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = 0; m < n; ++m) out.spatial(l, m) = L[(l * n + m) * n + dir.k];
      break;
    }
    case CovDirection::Kind::Vertical: {
      auto C = pack.C(pt);
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = 0; m < n; ++m) out.spatial(l, m) = C[((l * n + m) * n + dir.k) * p + dir.c];
      break;
    }
  }
  return out;
}

std::vector<double> add_connection_terms(const std::vector<IndexSlot>& valence, const std::vector<double>& values,
                                         std::vector<double> adapted, const DirectionCoefficients& coef,
                                         const Dims& dims) {
  const std::size_t rank = valence.size();
  std::vector<std::size_t> stride(rank, 1);
  for (std::size_t s = rank; s-- > 1;) stride[s - 1] = stride[s] * valence[s].extent;
  const std::size_t n = dims.n, p = dims.p;
  const Matrix& S = coef.spatial;
  const Matrix& Tm = coef.temporal;
  for (std::size_t k = 0; k < adapted.size(); ++k) {
    double acc = 0.0;
    for (std::size_t s = 0; s < rank; ++s) {
      const std::size_t idx = (k / stride[s]) % valence[s].extent;
      const std::size_t base = k - idx * stride[s];
      auto at = [&](std::size_t j) { return values[base + j * stride[s]]; };
      switch (valence[s].kind) {
        case SlotKind::SpatialUpper:
          for (std::size_t l = 0; l < n; ++l) acc += S(idx, l) * at(l);
          break;
        case SlotKind::SpatialLower:
          for (std::size_t l = 0; l < n; ++l) acc -= S(l, idx) * at(l);
          break;
        case SlotKind::TemporalUpper:
          for (std::size_t m = 0; m < p; ++m) acc += Tm(idx, m) * at(m);
          break;
        case SlotKind::TemporalLower:
          for (std::size_t m = 0; m < p; ++m) acc -= Tm(m, idx) * at(m);
          break;
        case SlotKind::VerticalUpper: {
          const std::size_t i = idx / p, a = idx % p;
          for (std::size_t l = 0; l < n; ++l) acc += S(i, l) * at(l * p + a);
          for (std::size_t m = 0; m < p; ++m) acc -= Tm(m, a) * at(i * p + m);
          break;
        }
        case SlotKind::VerticalLower: {
          const std::size_t i = idx / p, a = idx % p;
          for (std::size_t l = 0; l < n; ++l) acc -= S(l, i) * at(l * p + a);
          for (std::size_t m = 0; m < p; ++m) acc += Tm(a, m) * at(i * p + m);
          break;
        }
      }
    }
    adapted[k] += acc;
  }
  return adapted;
}

double CompatibilityReport::max() const { return std::max({g_t, g_m, g_v, h_t, h_m, h_v}); }

namespace {
double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
}  // namespace

CompatibilityReport metric_compatibility(const LinearConnectionPack& pack, const JetPoint& pt) {
  const Dims& d = pt.dims;
  const Space& space = pack.space();
  auto gf = [&space](const auto& q) { return space.g(q); };
  auto hf = [&space](const auto& q) { return space.h().lower(q.t); };
  const std::vector<IndexSlot> gv{IndexSlot::spatial_lower(d), IndexSlot::spatial_lower(d)};
  const std::vector<IndexSlot> hv{IndexSlot::temporal_lower(d), IndexSlot::temporal_lower(d)};
  CompatibilityReport r;
  for (std::size_t c = 0; c < d.p; ++c) {
    auto dir = CovDirection::t_horizontal(c);
    r.g_t = std::max(r.g_t, max_abs(covariant_derivative(gf, gv, dir, pack, pt)));
    r.h_t = std::max(r.h_t, max_abs(covariant_derivative(hf, hv, dir, pack, pt)));
  }
  for (std::size_t k = 0; k < d.n; ++k) {
    auto dir = CovDirection::m_horizontal(k);
    r.g_m = std::max(r.g_m, max_abs(covariant_derivative(gf, gv, dir, pack, pt)));
    r.h_m = std::max(r.h_m, max_abs(covariant_derivative(hf, hv, dir, pack, pt)));
    for (std::size_t c = 0; c < d.p; ++c) {
      auto vdir = CovDirection::vertical(k, c);
      r.g_v = std::max(r.g_v, max_abs(covariant_derivative(gf, gv, vdir, pack, pt)));
      r.h_v = std::max(r.h_v, max_abs(covariant_derivative(hf, hv, vdir, pack, pt)));
    }
  }
  return r;
}

double UniquenessReport::max() const { return std::max({G.mismatch, L.mismatch, C.mismatch}); }

namespace {

// Solve for X^m_{jk} (k fixed per derivative slot) from
//   X^m_{ik} g_mj + X^m_{jk} g_im = D_k g_ij
// plus symmetry X^i_{jk} = X^i_{kj} (symmetric) when `lower_symmetric` is
// false, or g_im X^m_{jk} = g_jm X^m_{ik} for every k when it is true.
// Unknown layout (m * n + j) * K + k with K derivative slots.
std::vector<double> solve_compatible(const Matrix& g, const std::vector<Matrix>& dg, bool lower_symmetric) {
  const std::size_t n = g.rows, K = dg.size();
  const std::size_t unknowns = n * n * K;
  auto U = [&](std::size_t m, std::size_t j, std::size_t k) { return (m * n + j) * K + k; };
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        std::vector<double> row(unknowns, 0.0);
        for (std::size_t m = 0; m < n; ++m) {
          row[U(m, i, k)] += g(m, j);
          row[U(m, j, k)] += g(i, m);
        }
        rows.push_back(row);
        rhs.push_back(dg[k](i, j));
      }
  if (!lower_symmetric) {
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < K; ++k) {
          std::vector<double> row(unknowns, 0.0);
          row[U(m, j, k)] = 1.0;
          row[U(m, k, j)] = -1.0;
          rows.push_back(row);
          rhs.push_back(0.0);
        }
  } else {
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          std::vector<double> row(unknowns, 0.0);
          for (std::size_t m = 0; m < n; ++m) {
            row[U(m, j, k)] += g(i, m);
            row[U(m, i, k)] -= g(j, m);
          }
          rows.push_back(row);
          rhs.push_back(0.0);
        }
  }
  Matrix A(rows.size(), unknowns);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < unknowns; ++c) A(r, c) = rows[r][c];
  return least_squares(A, rhs);
}

void compare(ProbeBlock& block, const std::vector<double>& want, const std::vector<double>& have,
             const std::vector<std::size_t>& extents) {
  for (std::size_t q = 0; q < want.size(); ++q) {
    double err = std::abs(want[q] - have[q]);
    if (!block.worst_index.empty() && err <= block.mismatch) continue;
    block.mismatch = err;
    block.worst_index.assign(extents.size(), 0);
    std::size_t rest = q;
    for (std::size_t s = extents.size(); s-- > 0;) {
      block.worst_index[s] = rest % extents[s];
      rest /= extents[s];
    }
  }
}

}  // namespace

UniquenessReport uniqueness_probe(const LinearConnectionPack& pack, const std::vector<JetPoint>& points) {
  UniquenessReport rep;
  const Space& space = pack.space();
  const NonlinearConnection& conn = pack.connection();
  auto gf = [&space](const auto& q) { return space.g(q); };
  for (const auto& pt : points) {
    const Dims& d = pt.dims;
    const std::size_t n = d.n, p = d.p;
    Matrix g = space.g(pt);

    std::vector<Matrix> dgx;
    for (std::size_t k = 0; k < n; ++k) dgx.push_back(conn.derivative(gf, pt, FrameDirection::spatial(k)));
    compare(rep.L, solve_compatible(g, dgx, false), pack.L(pt), {n, n, n});

    auto Gp = pack.G(pt);
    auto Cp = pack.C(pt);
    std::vector<double> Gw(n * n * p), Cw(n * n * n * p);
    for (std::size_t c = 0; c < p; ++c) {
      std::vector<Matrix> dgt{conn.derivative(gf, pt, FrameDirection::temporal(c))};
      auto sol = solve_compatible(g, dgt, true);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) Gw[(k * n + j) * p + c] = sol[k * n + j];
      std::vector<Matrix> dgv;
      for (std::size_t k = 0; k < n; ++k) dgv.push_back(conn.derivative(gf, pt, FrameDirection::vertical(k, c)));
      auto csol = solve_compatible(g, dgv, false);
      for (std::size_t q = 0; q < n * n * n; ++q) Cw[q * p + c] = csol[q];
    }
    compare(rep.G, Gw, Gp, {n, n, p});
    compare(rep.C, Cw, Cp, {n, n, n, p});
  }
  return rep;
}

DTensor pack_tensor(const LinearConnectionPack& pack, CoefficientFamily f, const JetPoint& pt) {
  const Dims& d = pt.dims;
  switch (f) {
    case CoefficientFamily::H:
      return DTensor({IndexSlot::temporal_upper(d), IndexSlot::temporal_lower(d), IndexSlot::temporal_lower(d)}, pack.H(pt));
    case CoefficientFamily::G:
      return DTensor({IndexSlot::spatial_upper(d), IndexSlot::spatial_lower(d), IndexSlot::temporal_lower(d)}, pack.G(pt));
    case CoefficientFamily::L:
      return DTensor({IndexSlot::spatial_upper(d), IndexSlot::spatial_lower(d), IndexSlot::spatial_lower(d)}, pack.L(pt));
    case CoefficientFamily::C:
      return DTensor({IndexSlot::spatial_upper(d), IndexSlot::spatial_lower(d), IndexSlot::vertical_lower(d)}, pack.C(pt));
  }
  throw Error("unknown coefficient family");
}

}  // namespace jetlag
