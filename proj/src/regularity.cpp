#include "jetlag/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jetlag {

Matrix vertical_hessian(const Space& space, const JetPoint& pt) { return space.vertical_hessian(pt); }

KroneckerSample kronecker_factor(const Space& space, const JetPoint& pt) {
  const Dims& d = space.dims();
  const std::size_t n = d.n, p = d.p;
  Matrix G = space.vertical_hessian(pt);
  Matrix hl = space.h().lower(pt.t);
  Matrix hu = space.h().upper(pt.t);
  KroneckerSample out;
  out.g_estimate = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) s += hl(a, b) * G(d.vidx(i, a), d.vidx(j, b));
      out.g_estimate(i, j) = s / static_cast<double>(p);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b)
          out.residual = std::max(out.residual, std::abs(G(d.vidx(i, a), d.vidx(j, b)) - hu(a, b) * out.g_estimate(i, j)));
  return out;
}

namespace {
double max_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.a.size(); ++k) m = std::max(m, std::abs(a.a[k] - b.a[k]));
  return m;
}
}  // namespace

RegularityVerdict kronecker_test(const Space& space, const SamplingBox& box, const KroneckerOptions& opt) {
  const Dims& d = space.dims();
  if (opt.samples == 0) throw Error("kronecker_test needs at least one sample");
  box.validate(d);

  // Draw every point up front so the sequence is independent of threading.
  Sampler sampler(opt.seed);
  std::vector<JetPoint> points;
  std::vector<std::vector<JetPoint>> redraws(opt.samples);
  for (std::size_t k = 0; k < opt.samples; ++k) {
    points.push_back(sampler.draw(d, box));
    for (std::size_t r = 0; r < opt.velocity_redraws; ++r) {
      JetPoint q = points.back();
      sampler.redraw_velocity(q, box);
      redraws[k].push_back(q);
    }
  }

  RegularityVerdict verdict;
  verdict.samples.resize(opt.samples);
  parallel_for(opt.samples, [&](std::size_t k) {
    SampleVerdict& sv = verdict.samples[k];
    sv.point = points[k];
    try {
      auto f = kronecker_factor(space, points[k]);
      sv.g_estimate = f.g_estimate;
      sv.residual = f.residual;
      sv.asymmetry = asymmetry(f.g_estimate);
      sv.determinant = determinant(f.g_estimate);
      sv.signature = signature_of(f.g_estimate);
      for (const auto& q : redraws[k]) sv.velocity_spread = std::max(sv.velocity_spread, max_diff(kronecker_factor(space, q).g_estimate, f.g_estimate));
      std::ostringstream note;
      if (sv.residual > opt.tol) note << "block residual " << sv.residual << " exceeds tolerance; ";
      if (sv.asymmetry > opt.tol) note << "g estimate not symmetric; ";
      if (!(std::abs(sv.determinant) > degeneracy_threshold(f.g_estimate)) || sv.signature.zero > 0)
        note << "g estimate degenerate (det " << sv.determinant << "); ";
      sv.note = note.str();
      sv.ok = sv.note.empty();
    } catch (const Error& e) {
      sv.ok = false;
      sv.note = e.what();
    }
  });

  bool all_ok = true;
  bool sig_constant = true;
  for (std::size_t k = 0; k < verdict.samples.size(); ++k) {
    const auto& sv = verdict.samples[k];
    all_ok = all_ok && sv.ok;
    verdict.max_block_residual = std::max(verdict.max_block_residual, sv.residual);
    verdict.max_velocity_spread = std::max(verdict.max_velocity_spread, sv.velocity_spread);
    if (k > 0 && sv.ok && verdict.samples[0].ok && !(sv.signature == verdict.samples[0].signature)) sig_constant = false;
  }
  verdict.signature = verdict.samples[0].signature;
  verdict.velocity_dependent_g = verdict.max_velocity_spread > opt.tol;

  std::ostringstream diag;
  for (std::size_t k = 0; k < verdict.samples.size(); ++k)
    if (!verdict.samples[k].ok) {
      diag << "sample " << k << ": " << verdict.samples[k].note;
      break;
    }
  if (!sig_constant) diag << "signature of g varies across samples; ";
  bool velocity_blocks = d.p >= 2 && verdict.velocity_dependent_g;
  if (velocity_blocks) diag << "g depends on velocities, impossible for a Kronecker h-regular L with p >= 2; ";
  verdict.is_kronecker = all_ok && sig_constant && !velocity_blocks;
  verdict.diagnostic = diag.str();
  return verdict;
}

ElectrodynamicsDecomposition electrodynamics_decompose(const Space& space, const SamplingBox& box,
                                                       const DecompositionOptions& opt) {
  const Dims& d = space.dims();
  box.validate(d);
  Sampler sampler(opt.seed);
  std::vector<JetPoint> bases;
  std::vector<std::vector<JetPoint>> trials(opt.base_points);
  for (std::size_t k = 0; k < opt.base_points; ++k) {
    JetPoint b = sampler.draw(d, box);
    std::fill(b.v.begin(), b.v.end(), 0.0);
    bases.push_back(b);
    for (std::size_t r = 0; r < opt.velocity_draws; ++r) {
      JetPoint q = b;
      sampler.redraw_velocity(q, box);
      trials[k].push_back(q);
    }
  }

  ElectrodynamicsDecomposition out;
  out.samples.resize(opt.base_points);
  std::vector<double> residuals(opt.base_points, 0.0), curl_asym(opt.base_points, 0.0);
  parallel_for(opt.base_points, [&](std::size_t k) {
    const JetPoint& b = bases[k];
    DecompositionSample& s = out.samples[k];
    s.base = b;
    s.F = space.L(b);
    Matrix hl = space.h().lower(b.t);
    Matrix hu = space.h().upper(b.t);
    s.U = Matrix(d.n, d.p);
    auto f = [&](const auto& q) { return space.L(q); };
    for (std::size_t i = 0; i < d.n; ++i)
      for (std::size_t a = 0; a < d.p; ++a) s.U(i, a) = directional(f, b, velocity_direction<double>(d, i, a));
    s.g = kronecker_factor(space, b).g_estimate;
    s.U_curl = space.U_curl(b);
    for (std::size_t i = 0; i < d.n; ++i)
      for (std::size_t j = 0; j < d.n; ++j)
        for (std::size_t a = 0; a < d.p; ++a)
          curl_asym[k] = std::max(curl_asym[k], std::abs(s.U_curl[(i * d.n + j) * d.p + a] + s.U_curl[(j * d.n + i) * d.p + a]));
    for (const auto& q : trials[k]) {
      double re = s.F;
      for (std::size_t i = 0; i < d.n; ++i)
        for (std::size_t a = 0; a < d.p; ++a) {
          re += s.U(i, a) * q.vel(i, a);
          for (std::size_t j = 0; j < d.n; ++j)
            for (std::size_t b2 = 0; b2 < d.p; ++b2) re += hu(a, b2) * s.g(i, j) * q.vel(i, a) * q.vel(j, b2);
        }
      double lv = space.L(q);
      residuals[k] = std::max(residuals[k], std::abs(lv - re) / std::max(1.0, std::abs(lv)));
    }
  });
  for (std::size_t k = 0; k < opt.base_points; ++k) {
    out.max_reassembly_residual = std::max(out.max_reassembly_residual, residuals[k]);
    out.max_curl_asymmetry = std::max(out.max_curl_asymmetry, curl_asym[k]);
  }
  if (out.max_reassembly_residual > opt.tol) {
    std::ostringstream msg;
    msg << "L is not of electrodynamics form: reassembly residual " << out.max_reassembly_residual << " exceeds " << opt.tol;
    throw DecompositionError(msg.str(), out.max_reassembly_residual);
  }
  return out;
}

double declared_roundtrip_residual(const Space& space, const SamplingBox& box, std::size_t count, std::uint64_t seed) {
  const auto& model = space.model();
  if (!model.declared()) return 0.0;
  Sampler sampler(seed);
  double worst = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    JetPoint q = sampler.draw(space.dims(), box);
    double lv = model(q);
    worst = std::max(worst, std::abs(lv - model.assemble(q)) / std::max(1.0, std::abs(lv)));
  }
  return worst;
}

void require_electrodynamic(const Space& space, const SamplingBox& box, std::uint64_t seed) {
  if (space.dims().p == 1 || space.model().builtin()) return;
  DecompositionOptions opt;
  opt.base_points = 4;
  opt.seed = seed;
  electrodynamics_decompose(space, box, opt);
}

}  // namespace jetlag
