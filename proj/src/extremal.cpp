#include "jetlag/extremal.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace jetlag {

namespace {

void require_single_time(const Space& space) {
  if (space.dims().p != 1) throw DimensionError("extremal curves need p = 1");
}

JetPoint state_point(const Dims& d, double t, const std::vector<double>& x, const std::vector<double>& y) {
  return make_point(d, {t}, x, y);
}

std::vector<double> axpy(const std::vector<double>& a, double s, const std::vector<double>& b) {
  std::vector<double> out(a);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += s * b[k];
  return out;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

void ExtremalProblem::validate(const Dims& d) const {
  if (d.p != 1) throw DimensionError("extremal problems need p = 1");
  if (x0.size() != d.n || y0.size() != d.n) throw DimensionError("initial state must have n components");
  if (!(dt > 0.0)) throw Error("dt must be positive");
  if (!(t_end > t0)) throw Error("t_end must exceed t0");
}

std::vector<double> extremal_acceleration(const Space& space, double t, const std::vector<double>& x,
                                          const std::vector<double>& y) {
  require_single_time(space);
  const Dims& d = space.dims();
  auto pt = state_point(d, t, x, y);
  const double h11 = space.h().lower<double>(pt.t)(0, 0);
  const double H = h_christoffel(space.h(), pt.t)[0];
  auto G = space.spray_G(pt);
  std::vector<double> out(d.n);
  for (std::size_t k = 0; k < d.n; ++k) out[k] = H * y[k] - 2.0 * h11 * G[k];
  return out;
}

std::vector<double> el_residual(const Space& space, const TrajectoryState& s, const std::vector<double>& xdd) {
  require_single_time(space);
  return space.euler_lagrange(state_point(space.dims(), s.t, s.x, s.y), xdd);
}

std::vector<double> el_residual(const Space& space, const TrajectoryState& s) {
  return el_residual(space, s, extremal_acceleration(space, s.t, s.x, s.y));
}

Trajectory integrate_extremal(const Space& space, const ExtremalProblem& problem) {
  problem.validate(space.dims());
  const std::size_t steps = static_cast<std::size_t>(std::llround((problem.t_end - problem.t0) / problem.dt));
  const double dt = (problem.t_end - problem.t0) / static_cast<double>(std::max<std::size_t>(steps, 1));
  Trajectory traj;
  TrajectoryState s{problem.t0, problem.x0, problem.y0};
  auto accept = [&](const TrajectoryState& st) {
    traj.max_el_residual = std::max(traj.max_el_residual, norm2(el_residual(space, st)));
    traj.states.push_back(st);
  };
  try {
    accept(s);
    for (std::size_t k = 0; k < steps; ++k) {
      const double t = s.t;
      auto a1 = extremal_acceleration(space, t, s.x, s.y);
      auto x2 = axpy(s.x, 0.5 * dt, s.y), y2 = axpy(s.y, 0.5 * dt, a1);
      auto a2 = extremal_acceleration(space, t + 0.5 * dt, x2, y2);
      auto x3 = axpy(s.x, 0.5 * dt, y2), y3 = axpy(s.y, 0.5 * dt, a2);
      auto a3 = extremal_acceleration(space, t + 0.5 * dt, x3, y3);
      auto x4 = axpy(s.x, dt, y3), y4 = axpy(s.y, dt, a3);
      auto a4 = extremal_acceleration(space, t + dt, x4, y4);
      TrajectoryState next{problem.t0 + static_cast<double>(k + 1) * dt, s.x, s.y};
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        next.x[i] += dt / 6.0 * (s.y[i] + 2.0 * y2[i] + 2.0 * y3[i] + y4[i]);
        next.y[i] += dt / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
      }
      for (double v : next.x)
        if (!std::isfinite(v)) throw DegeneracyError("non-finite state", 0.0);
      accept(next);
      s = std::move(next);
    }
  } catch (const DegeneracyError& e) {
    traj.aborted = true;
    traj.abort_reason = e.what();
  }
  return traj;
}

double action_value(const Space& space, const Trajectory& traj) {
  require_single_time(space);
  const Dims& d = space.dims();
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
    double f[2];
    for (int e = 0; e < 2; ++e) {
      const auto& s = traj.states[k + e];
      auto pt = state_point(d, s.t, s.x, s.y);
      f[e] = space.L(pt) * std::sqrt(std::abs(space.h().lower<double>(pt.t)(0, 0)));
    }
    sum += 0.5 * (traj.states[k + 1].t - traj.states[k].t) * (f[0] + f[1]);
  }
  return sum;
}

Trajectory perturb(const Trajectory& traj, const Variation& v, double eps) {
  Trajectory out = traj;
  std::vector<double> phi, dphi;
  for (auto& s : out.states) {
    phi.assign(s.x.size(), 0.0);
    dphi.assign(s.x.size(), 0.0);
    v(s.t, phi, dphi);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      s.x[i] += eps * phi[i];
      s.y[i] += eps * dphi[i];
    }
  }
  return out;
}

FirstVariation first_variation_check(const Space& space, const Trajectory& traj, double eps_a, double eps_b) {
  if (traj.states.size() < 2) throw Error("trajectory too short");
  const double t0 = traj.states.front().t, T = traj.states.back().t - t0;
  const double pi = std::numbers::pi;
  Variation bump = [&](double t, std::vector<double>& phi, std::vector<double>& dphi) {
    const double s = (t - t0) / T;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      phi[i] = static_cast<double>(i + 1) * std::sin(pi * s) * std::sin(pi * s);
      dphi[i] = static_cast<double>(i + 1) * 2.0 * std::sin(pi * s) * std::cos(pi * s) * pi / T;
    }
  };
  FirstVariation fv;
  fv.eps = {eps_a, eps_b};
  const double base = action_value(space, traj);
  for (double e : fv.eps) fv.delta.push_back(action_value(space, perturb(traj, bump, e)) - base);
  fv.expected = (eps_a / eps_b) * (eps_a / eps_b);
  fv.ratio = fv.delta[1] != 0.0 ? fv.delta[0] / fv.delta[1] : 0.0;
  fv.passed = std::abs(fv.ratio - fv.expected) <= 0.2 * fv.expected;
  return fv;
}

MinimalityCheck action_minimality(const Space& space, const Trajectory& traj, std::size_t count, std::uint64_t seed,
                                  double amplitude) {
  if (traj.states.size() < 2) throw Error("trajectory too short");
  MinimalityCheck mc;
  mc.count = count;
  const auto& s0 = traj.states.front();
  auto sig = signature_of(space.g(state_point(space.dims(), s0.t, s0.x, s0.y)));
  if (sig.neg != 0 || sig.zero != 0) {
    mc.skipped = true;
    mc.passed = true;
    return mc;
  }
  mc.extremal_action = action_value(space, traj);
  mc.min_perturbed_action = std::numeric_limits<double>::infinity();
  const std::size_t n = space.dims().n;
  const std::size_t modes = 3;
  const double t0 = s0.t, T = traj.states.back().t - t0;
  const double pi = std::numbers::pi;
  Sampler rng(seed);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<double> coef(n * modes);
    for (auto& a : coef) a = rng.uniform(-amplitude, amplitude);
    Variation v = [&](double t, std::vector<double>& phi, std::vector<double>& dphi) {
      const double s = (t - t0) / T;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t m = 0; m < modes; ++m) {
          const double k = pi * static_cast<double>(m + 1);
          phi[i] += coef[i * modes + m] * std::sin(k * s);
          dphi[i] += coef[i * modes + m] * k / T * std::cos(k * s);
        }
    };
    mc.min_perturbed_action = std::min(mc.min_perturbed_action, action_value(space, perturb(traj, v, 1.0)));
  }
  mc.passed = mc.extremal_action <= mc.min_perturbed_action;
  return mc;
}

GridMap GridMap::sample(const std::vector<std::size_t>& shape, const std::vector<Interval>& box,
                        const std::function<std::vector<double>(const std::vector<double>&)>& f) {
  if (shape.size() != box.size()) throw DimensionError("grid shape and box differ in rank");
  GridMap g;
  g.shape = shape;
  g.box = box;
  const std::size_t count = g.node_count();
  g.values.resize(count);
  for (std::size_t k = 0; k < count; ++k) g.values[k] = f(g.node_time(k));
  return g;
}

double GridMap::spacing(std::size_t axis) const {
  return (box[axis].hi - box[axis].lo) / static_cast<double>(shape[axis] - 1);
}

std::size_t GridMap::node_count() const {
  std::size_t c = 1;
  for (auto s : shape) c *= s;
  return c;
}

std::vector<std::size_t> GridMap::unravel(std::size_t node) const {
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t a = shape.size(); a-- > 0;) {
    idx[a] = node % shape[a];
    node /= shape[a];
  }
  return idx;
}

std::size_t GridMap::ravel(const std::vector<std::size_t>& idx) const {
  std::size_t k = 0;
  for (std::size_t a = 0; a < shape.size(); ++a) k = k * shape[a] + idx[a];
  return k;
}

std::vector<double> GridMap::node_time(std::size_t node) const {
  auto idx = unravel(node);
  std::vector<double> t(shape.size());
  for (std::size_t a = 0; a < shape.size(); ++a) t[a] = box[a].lo + static_cast<double>(idx[a]) * spacing(a);
  return t;
}

namespace {

void check_grid(const Space& space, const GridMap& map) {
  const Dims& d = space.dims();
  if (d.p < 2) throw DimensionError("grid maps need p >= 2");
  if (map.shape.size() != d.p || map.box.size() != d.p) throw DimensionError("grid rank must equal p");
  for (std::size_t a = 0; a < d.p; ++a) {
    if (map.shape[a] < 5) throw DimensionError("grid needs at least 5 nodes per axis");
    if (!(map.box[a].hi > map.box[a].lo)) throw DimensionError("grid box axis is empty");
  }
  if (map.values.size() != map.node_count()) throw DimensionError("grid value count does not match shape");
  for (const auto& v : map.values)
    if (v.size() != d.n) throw DimensionError("grid values must have n components");
}

// First derivatives of x along each axis at a node (central inside,
// second-order one-sided on the boundary); layout i * p + a.
std::vector<double> grid_velocity(const GridMap& map, std::size_t node, std::size_t n) {
  const std::size_t p = map.shape.size();
  auto idx = map.unravel(node);
  std::vector<double> v(n * p, 0.0);
  for (std::size_t a = 0; a < p; ++a) {
    const double h = map.spacing(a);
    auto at = [&](long off) {
      auto j = idx;
      j[a] = static_cast<std::size_t>(static_cast<long>(idx[a]) + off);
      return map.values[map.ravel(j)];
    };
    std::vector<double> w;
    std::vector<long> offs;
    if (idx[a] == 0) {
      offs = {0, 1, 2};
      w = {-1.5, 2.0, -0.5};
    } else if (idx[a] + 1 == map.shape[a]) {
      offs = {0, -1, -2};
      w = {1.5, -2.0, 0.5};
    } else {
      offs = {1, -1};
      w = {0.5, -0.5};
    }
    for (std::size_t s = 0; s < offs.size(); ++s) {
      auto x = at(offs[s]);
      for (std::size_t i = 0; i < n; ++i) v[i * p + a] += w[s] * x[i] / h;
    }
  }
  return v;
}

}  // namespace

HarmonicResidual harmonic_residual(const Space& space, const GridMap& map) {
  check_grid(space, map);
  const Dims& d = space.dims();
  const std::size_t n = d.n, p = d.p;
  HarmonicResidual out;
  for (std::size_t k = 0; k < map.node_count(); ++k) {
    auto idx = map.unravel(k);
    bool interior = true;
    for (std::size_t a = 0; a < p; ++a) interior = interior && idx[a] > 0 && idx[a] + 1 < map.shape[a];
    if (interior) out.nodes.push_back(k);
  }
  out.residual.resize(out.nodes.size());
  parallel_for(out.nodes.size(), [&](std::size_t q) {
    const std::size_t node = out.nodes[q];
    auto idx = map.unravel(node);
    auto shifted = [&](std::size_t a, long da, std::size_t b, long db) {
      auto j = idx;
      j[a] = static_cast<std::size_t>(static_cast<long>(j[a]) + da);
      j[b] = static_cast<std::size_t>(static_cast<long>(j[b]) + db);
      return map.values[map.ravel(j)];
    };
    const auto& x0 = map.values[node];
    JetPoint pt = make_point(d, map.node_time(node), x0, grid_velocity(map, node, n));
    // x^k_{ab}
    std::vector<double> xab(n * p * p);
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a; b < p; ++b) {
        const double ha = map.spacing(a), hb = map.spacing(b);
        for (std::size_t i = 0; i < n; ++i) {
          double v;
          if (a == b)
            v = (shifted(a, 1, a, 0)[i] - 2.0 * x0[i] + shifted(a, -1, a, 0)[i]) / (ha * ha);
          else
            v = (shifted(a, 1, b, 1)[i] - shifted(a, 1, b, -1)[i] - shifted(a, -1, b, 1)[i] + shifted(a, -1, b, -1)[i]) /
                (4.0 * ha * hb);
          xab[(i * p + a) * p + b] = v;
          xab[(i * p + b) * p + a] = v;
        }
      }
    Matrix hu = space.h().upper<double>(pt.t);
    auto H = h_christoffel(space.h(), pt.t);
    auto G = space.spray_G(pt);
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      double lap = 0.0;
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) {
          double inner = xab[(i * p + a) * p + b];
          for (std::size_t c = 0; c < p; ++c) inner -= H[(c * p + a) * p + b] * pt.vel(i, c);
          lap += hu(a, b) * inner;
        }
      r[i] = lap + 2.0 * G[i];
    }
    out.residual[q] = std::move(r);
  });
  double sq = 0.0;
  for (const auto& r : out.residual) {
    const double nr = norm2(r);
    out.max_norm = std::max(out.max_norm, nr);
    sq += nr * nr;
  }
  if (!out.residual.empty()) out.rms_norm = std::sqrt(sq / static_cast<double>(out.residual.size()));
  return out;
}

double action_value(const Space& space, const GridMap& map) {
  check_grid(space, map);
  const Dims& d = space.dims();
  const std::size_t p = d.p;
  std::vector<double> f(map.node_count());
  parallel_for(map.node_count(), [&](std::size_t k) {
    JetPoint pt = make_point(d, map.node_time(k), map.values[k], grid_velocity(map, k, d.n));
    f[k] = space.L(pt) * std::sqrt(std::abs(determinant(space.h().lower<double>(pt.t))));
  });
  double sum = 0.0;
  for (std::size_t k = 0; k < map.node_count(); ++k) {
    auto idx = map.unravel(k);
    double w = 1.0;
    for (std::size_t a = 0; a < p; ++a) {
      w *= map.spacing(a);
      if (idx[a] == 0 || idx[a] + 1 == map.shape[a]) w *= 0.5;
    }
    sum += w * f[k];
  }
  return sum;
}

}  // namespace jetlag
